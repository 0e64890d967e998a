#include "bingham2d/operators.hpp"

#include <cmath>

namespace bingham2d {

// ---- field algebra ---------------------------------------------------------

void fill(VelocityField& u, double value) {
    for (auto& x : u.u1) x = value;
    for (auto& x : u.u2) x = value;
}

void fill(ScalarCellField& p, double value) {
    for (auto& x : p.v) x = value;
}

VelocityField axpy(double alpha, const VelocityField& x, const VelocityField& y) {
    VelocityField r = y;
    axpy_inplace(alpha, x, r);
    return r;
}

void axpy_inplace(double alpha, const VelocityField& x, VelocityField& y) {
    for (size_t k = 0; k < y.u1.size(); ++k) y.u1[k] += alpha * x.u1[k];
    for (size_t k = 0; k < y.u2.size(); ++k) y.u2[k] += alpha * x.u2[k];
}

void scale_inplace(VelocityField& x, double alpha) {
    for (auto& v : x.u1) v *= alpha;
    for (auto& v : x.u2) v *= alpha;
}

ScalarCellField axpy(double alpha, const ScalarCellField& x, const ScalarCellField& y) {
    ScalarCellField r = y;
    axpy_inplace(alpha, x, r);
    return r;
}

void axpy_inplace(double alpha, const ScalarCellField& x, ScalarCellField& y) {
    for (size_t k = 0; k < y.v.size(); ++k) y.v[k] += alpha * x.v[k];
}

void scale_inplace(ScalarCellField& x, double alpha) {
    for (auto& v : x.v) v *= alpha;
}

// ---- inner products and norms ---------------------------------------------

double dot(const Grid& g, const VelocityField& u, const VelocityField& v) {
    double s = 0.0;
    for (size_t k = 0; k < u.u1.size(); ++k) s += u.u1[k] * v.u1[k];
    for (size_t k = 0; k < u.u2.size(); ++k) s += u.u2[k] * v.u2[k];
    return g.cell_area() * s;
}

double dot(const Grid& g, const ScalarCellField& p, const ScalarCellField& q) {
    double s = 0.0;
    for (size_t k = 0; k < p.v.size(); ++k) s += p.v[k] * q.v[k];
    return g.cell_area() * s;
}

double dot(const Grid& g, const TensorCellField& s, const TensorCellField& t) {
    double acc = 0.0;
    for (size_t k = 0; k < s.cells(); ++k)
        acc += s.t11[k] * t.t11[k] + s.t12[k] * t.t12[k] + s.t21[k] * t.t21[k] + s.t22[k] * t.t22[k];
    return g.cell_area() * acc;
}

double l2_norm(const Grid& g, const VelocityField& u) { return std::sqrt(dot(g, u, u)); }
double l2_norm(const Grid& g, const ScalarCellField& p) { return std::sqrt(dot(g, p, p)); }

double l1_norm(const Grid& g, const ScalarCellField& p) {
    double s = 0.0;
    for (double x : p.v) s += std::fabs(x);
    return g.cell_area() * s;
}

double linf_norm(const VelocityField& u) {
    double m = 0.0;
    for (double x : u.u1) m = std::max(m, std::fabs(x));
    for (double x : u.u2) m = std::max(m, std::fabs(x));
    return m;
}

double linf_norm(const ScalarCellField& p) {
    double m = 0.0;
    for (double x : p.v) m = std::max(m, std::fabs(x));
    return m;
}

double mean(const Grid&, const ScalarCellField& p) {
    double s = 0.0;
    for (double x : p.v) s += x;
    return s / (double)p.v.size();
}

double h1_seminorm(const Grid& g, const VelocityField& u) {
    TensorCellField t = velocity_gradient(g, u);
    return std::sqrt(dot(g, t, t));
}

double v_norm(const Grid& g, const VelocityField& u) {
    double a = l2_norm(g, u);
    double b = h1_seminorm(g, u);
    return std::sqrt(a * a + b * b);
}

double h2_seminorm(const Grid& g, const VelocityField& u) {
    TensorCellField t = velocity_gradient(g, u);
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    const std::vector<double>* comps[4] = {&t.t11, &t.t12, &t.t21, &t.t22};
    double s = 0.0;
    for (const auto* comp : comps) {
        const auto& c = *comp;
        auto at = [&](int i, int j) { return c[(size_t)i + (size_t)g.nx * j]; };
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double dx, dy;
                if (i == 0)
                    dx = (at(1, j) - at(0, j)) * ihx;
                else if (i == g.nx - 1)
                    dx = (at(g.nx - 1, j) - at(g.nx - 2, j)) * ihx;
                else
                    dx = (at(i + 1, j) - at(i - 1, j)) * (0.5 * ihx);
                if (j == 0)
                    dy = (at(i, 1) - at(i, 0)) * ihy;
                else if (j == g.ny - 1)
                    dy = (at(i, g.ny - 1) - at(i, g.ny - 2)) * ihy;
                else
                    dy = (at(i, j + 1) - at(i, j - 1)) * (0.5 * ihy);
                s += dx * dx + dy * dy;
            }
    }
    return std::sqrt(g.cell_area() * s);
}

double weighted_gradient_l1(const Grid& g, const ScalarCellField& w, const VelocityField& u) {
    require_same_shape(g, w, "weighted_gradient_l1");
    require_same_shape(g, u, "weighted_gradient_l1");
    TensorCellField t = velocity_gradient(g, u);
    double s = 0.0;
    for (size_t k = 0; k < t.cells(); ++k) {
        if (w.v[k] < 0.0)
            throw std::invalid_argument("weighted_gradient_l1: weight must be nonnegative");
        s += w.v[k] * std::sqrt(t.t11[k] * t.t11[k] + t.t12[k] * t.t12[k] +
                                t.t21[k] * t.t21[k] + t.t22[k] * t.t22[k]);
    }
    return g.cell_area() * s;
}

// ---- difference operators --------------------------------------------------

TensorCellField velocity_gradient(const Grid& g, const VelocityField& u) {
    require_same_shape(g, u, "velocity_gradient");
    const int nx = g.nx, ny = g.ny;
    TensorCellField t(nx, ny);
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const size_t c = t.idx(i, j);
            t.t11[c] = (u.u1_at(i + 1, j) - u.u1_at(i, j)) * ihx;
            t.t22[c] = (u.u2_at(i, j + 1) - u.u2_at(i, j)) * ihy;

            // d u1 / dy from center-averaged u1 with mirror ghosts at walls
            const int jp = (j == ny - 1) ? j : j + 1;
            const int jm = (j == 0) ? j : j - 1;
            const double up = 0.5 * (u.u1_at(i, jp) + u.u1_at(i + 1, jp));
            const double um = 0.5 * (u.u1_at(i, jm) + u.u1_at(i + 1, jm));
            t.t12[c] = (up - um) * (0.5 * ihy);

            // d u2 / dx
            const int ip = (i == nx - 1) ? i : i + 1;
            const int im = (i == 0) ? i : i - 1;
            const double vp = 0.5 * (u.u2_at(ip, j) + u.u2_at(ip, j + 1));
            const double vm = 0.5 * (u.u2_at(im, j) + u.u2_at(im, j + 1));
            t.t21[c] = (vp - vm) * (0.5 * ihx);
        }
    }
    return t;
}

VelocityField gradient_adjoint(const Grid& g, const TensorCellField& s) {
    require_same_shape(g, s, "gradient_adjoint");
    const int nx = g.nx, ny = g.ny;
    VelocityField r(nx, ny);
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const size_t c = s.idx(i, j);

            // t11 = (u1(i+1,j) - u1(i,j))/hx
            r.u1_at(i + 1, j) += s.t11[c] * ihx;
            r.u1_at(i, j) -= s.t11[c] * ihx;

            // t22 = (u2(i,j+1) - u2(i,j))/hy
            r.u2_at(i, j + 1) += s.t22[c] * ihy;
            r.u2_at(i, j) -= s.t22[c] * ihy;

            // t12 = (u1c(i,jp) - u1c(i,jm)) / (2 hy), u1c = (u1(i,.)+u1(i+1,.))/2
            {
                const int jp = (j == ny - 1) ? j : j + 1;
                const int jm = (j == 0) ? j : j - 1;
                const double w = s.t12[c] * (0.25 * ihy);
                r.u1_at(i, jp) += w;
                r.u1_at(i + 1, jp) += w;
                r.u1_at(i, jm) -= w;
                r.u1_at(i + 1, jm) -= w;
            }

            // t21 = (u2c(ip,j) - u2c(im,j)) / (2 hx), u2c = (u2(.,j)+u2(.,j+1))/2
            {
                const int ip = (i == nx - 1) ? i : i + 1;
                const int im = (i == 0) ? i : i - 1;
                const double w = s.t21[c] * (0.25 * ihx);
                r.u2_at(ip, j) += w;
                r.u2_at(ip, j + 1) += w;
                r.u2_at(im, j) -= w;
                r.u2_at(im, j + 1) -= w;
            }
        }
    }
    r.enforce_slip();
    return r;
}

ScalarCellField divergence(const Grid& g, const VelocityField& u) {
    require_same_shape(g, u, "divergence");
    ScalarCellField d(g.nx, g.ny);
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            d.at(i, j) = (u.u1_at(i + 1, j) - u.u1_at(i, j)) * ihx +
                         (u.u2_at(i, j + 1) - u.u2_at(i, j)) * ihy;
    return d;
}

VelocityField pressure_gradient(const Grid& g, const ScalarCellField& p) {
    require_same_shape(g, p, "pressure_gradient");
    VelocityField r(g.nx, g.ny);
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            r.u1_at(i, j) = (p.at(i, j) - p.at(i - 1, j)) * ihx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            r.u2_at(i, j) = (p.at(i, j) - p.at(i, j - 1)) * ihy;
    return r;
}

ScalarCellField tensor_magnitude(const TensorCellField& s) {
    ScalarCellField m(s.nx, s.ny);
    for (size_t k = 0; k < s.cells(); ++k)
        m.v[k] = std::sqrt(s.t11[k] * s.t11[k] + s.t12[k] * s.t12[k] +
                           s.t21[k] * s.t21[k] + s.t22[k] * s.t22[k]);
    return m;
}

void average_to_centers(const Grid& g, const VelocityField& u,
                        ScalarCellField& u1c, ScalarCellField& u2c) {
    require_same_shape(g, u, "average_to_centers");
    u1c = ScalarCellField(g.nx, g.ny);
    u2c = ScalarCellField(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            u1c.at(i, j) = 0.5 * (u.u1_at(i, j) + u.u1_at(i + 1, j));
            u2c.at(i, j) = 0.5 * (u.u2_at(i, j) + u.u2_at(i, j + 1));
        }
}

VelocityField average_adjoint(const Grid& g, const ScalarCellField& m1, const ScalarCellField& m2) {
    require_same_shape(g, m1, "average_adjoint");
    require_same_shape(g, m2, "average_adjoint");
    VelocityField r(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            r.u1_at(i, j) += 0.5 * m1.at(i, j);
            r.u1_at(i + 1, j) += 0.5 * m1.at(i, j);
            r.u2_at(i, j) += 0.5 * m2.at(i, j);
            r.u2_at(i, j + 1) += 0.5 * m2.at(i, j);
        }
    r.enforce_slip();
    return r;
}

// ---- cell Poisson and Leray projection -------------------------------------

namespace {

ScalarCellField apply_cell_laplacian(const Grid& g, const ScalarCellField& phi) {
    ScalarCellField d = divergence(g, pressure_gradient(g, phi));
    for (auto& x : d.v) x = -x;
    return d;
}

void remove_mean(ScalarCellField& p) {
    double m = 0.0;
    for (double x : p.v) m += x;
    m /= (double)p.v.size();
    for (auto& x : p.v) x -= m;
}

}  // namespace

int solve_cell_poisson(const Grid& g, const ScalarCellField& rhs, ScalarCellField& phi,
                       double rel_tol, int max_iter) {
    require_same_shape(g, rhs, "solve_cell_poisson");
    ScalarCellField b = rhs;
    remove_mean(b);
    if (phi.nx != g.nx || phi.ny != g.ny) phi = ScalarCellField(g);
    remove_mean(phi);

    ScalarCellField r = axpy(-1.0, apply_cell_laplacian(g, phi), b);
    double rr = dot(g, r, r);
    const double b2 = dot(g, b, b);
    const double tol2 = rel_tol * rel_tol * (b2 > 0.0 ? b2 : 1.0);
    if (rr <= tol2) return 0;

    ScalarCellField p = r;
    int it = 0;
    for (; it < max_iter; ++it) {
        ScalarCellField ap = apply_cell_laplacian(g, p);
        const double pap = dot(g, p, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rr / pap;
        axpy_inplace(alpha, p, phi);
        axpy_inplace(-alpha, ap, r);
        const double rr_new = dot(g, r, r);
        if (rr_new <= tol2) { ++it; break; }
        const double beta = rr_new / rr;
        rr = rr_new;
        ScalarCellField pn = r;
        axpy_inplace(beta, p, pn);
        p = pn;
    }
    remove_mean(phi);
    return it;
}

VelocityField leray_project(const Grid& g, const VelocityField& u, double rel_tol, int max_iter) {
    ScalarCellField d = divergence(g, u);
    for (auto& x : d.v) x = -x;
    ScalarCellField phi(g);
    solve_cell_poisson(g, d, phi, rel_tol, max_iter);
    VelocityField r = axpy(-1.0, pressure_gradient(g, phi), u);
    r.enforce_slip();
    return r;
}

VelocityField random_slip_field(const Grid& g, std::mt19937& rng, int smooth_passes) {
    std::normal_distribution<double> nrm(0.0, 1.0);
    VelocityField u(g);
    for (auto& x : u.u1) x = nrm(rng);
    for (auto& x : u.u2) x = nrm(rng);
    u.enforce_slip();

    for (int pass = 0; pass < smooth_passes; ++pass) {
        VelocityField s(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) {
                const double left = u.u1_at(i - 1, j);
                const double right = u.u1_at(i + 1, j);
                const double down = (j > 0) ? u.u1_at(i, j - 1) : u.u1_at(i, j);
                const double up = (j < g.ny - 1) ? u.u1_at(i, j + 1) : u.u1_at(i, j);
                s.u1_at(i, j) = 0.5 * u.u1_at(i, j) + 0.125 * (left + right + down + up);
            }
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double down = u.u2_at(i, j - 1);
                const double up = u.u2_at(i, j + 1);
                const double left = (i > 0) ? u.u2_at(i - 1, j) : u.u2_at(i, j);
                const double right = (i < g.nx - 1) ? u.u2_at(i + 1, j) : u.u2_at(i, j);
                s.u2_at(i, j) = 0.5 * u.u2_at(i, j) + 0.125 * (left + right + down + up);
            }
        u = s;
    }
    const double n = v_norm(g, u);
    if (n > 0.0) scale_inplace(u, 1.0 / n);
    return u;
}

}  // namespace bingham2d
