#include "bingham2d/krylov.hpp"

#include <cmath>

namespace bingham2d {

namespace {

void apply_jacobi(const VelocityField& diag, const VelocityField& r, VelocityField& z) {
    z = r;
    for (size_t k = 0; k < z.u1.size(); ++k) z.u1[k] /= diag.u1[k];
    for (size_t k = 0; k < z.u2.size(); ++k) z.u2[k] /= diag.u2[k];
}

}  // namespace

KrylovResult solve_cg(const Grid& g, const VelocityOp& op, const VelocityField& rhs,
                      VelocityField& x, const VelocityField& diag,
                      double rel_tol, int max_iter) {
    KrylovResult res;
    const double bnorm = l2_norm(g, rhs);
    const double target = rel_tol * (bnorm > 0.0 ? bnorm : 1.0);

    VelocityField ax(g.nx, g.ny);
    op(x, ax);
    VelocityField r = axpy(-1.0, ax, rhs);
    double rnorm = l2_norm(g, r);
    if (rnorm <= target) {
        res.converged = true;
        res.rel_residual = (bnorm > 0.0) ? rnorm / bnorm : rnorm;
        return res;
    }

    VelocityField z(g.nx, g.ny);
    apply_jacobi(diag, r, z);
    VelocityField p = z;
    double rz = dot(g, r, z);
    VelocityField ap(g.nx, g.ny);

    for (int it = 0; it < max_iter; ++it) {
        op(p, ap);
        const double pap = dot(g, p, ap);
        if (!(pap > 0.0)) break;  // loss of positivity: stop with best iterate
        const double alpha = rz / pap;
        axpy_inplace(alpha, p, x);
        axpy_inplace(-alpha, ap, r);
        res.iters = it + 1;
        rnorm = l2_norm(g, r);
        if (rnorm <= target) {
            res.converged = true;
            break;
        }
        apply_jacobi(diag, r, z);
        const double rz_new = dot(g, r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        VelocityField pn = z;
        axpy_inplace(beta, p, pn);
        p = pn;
    }
    res.rel_residual = (bnorm > 0.0) ? rnorm / bnorm : rnorm;
    return res;
}

KrylovResult solve_bicgstab(const Grid& g, const VelocityOp& op, const VelocityField& rhs,
                            VelocityField& x, const VelocityField& diag,
                            double rel_tol, int max_iter) {
    KrylovResult res;
    const double bnorm = l2_norm(g, rhs);
    const double target = rel_tol * (bnorm > 0.0 ? bnorm : 1.0);

    VelocityField ax(g.nx, g.ny);
    op(x, ax);
    VelocityField r = axpy(-1.0, ax, rhs);
    double rnorm = l2_norm(g, r);
    if (rnorm <= target) {
        res.converged = true;
        res.rel_residual = (bnorm > 0.0) ? rnorm / bnorm : rnorm;
        return res;
    }

    const VelocityField r0 = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    VelocityField p(g.nx, g.ny), v(g.nx, g.ny);
    VelocityField phat(g.nx, g.ny), shat(g.nx, g.ny), t(g.nx, g.ny);

    for (int it = 0; it < max_iter; ++it) {
        const double rho_new = dot(g, r0, r);
        if (rho_new == 0.0) break;
        if (it == 0) {
            p = r;
        } else {
            const double beta = (rho_new / rho) * (alpha / omega);
            // p = r + beta*(p - omega*v)
            axpy_inplace(-omega, v, p);
            scale_inplace(p, beta);
            axpy_inplace(1.0, r, p);
        }
        rho = rho_new;
        apply_jacobi(diag, p, phat);
        op(phat, v);
        const double r0v = dot(g, r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        VelocityField s = axpy(-alpha, v, r);
        res.iters = it + 1;
        if (l2_norm(g, s) <= target) {
            axpy_inplace(alpha, phat, x);
            r = s;
            rnorm = l2_norm(g, r);
            res.converged = true;
            break;
        }
        apply_jacobi(diag, s, shat);
        op(shat, t);
        const double tt = dot(g, t, t);
        if (tt == 0.0) break;
        omega = dot(g, t, s) / tt;
        axpy_inplace(alpha, phat, x);
        axpy_inplace(omega, shat, x);
        r = axpy(-omega, t, s);
        rnorm = l2_norm(g, r);
        if (rnorm <= target) {
            res.converged = true;
            break;
        }
        if (omega == 0.0) break;
    }
    res.rel_residual = (bnorm > 0.0) ? rnorm / bnorm : rnorm;
    return res;
}

VelocityField weighted_laplacian_diagonal(const Grid& g, const ScalarCellField& a, double sigma) {
    require_same_shape(g, a, "weighted_laplacian_diagonal");
    const int nx = g.nx, ny = g.ny;
    VelocityField d(nx, ny);
    const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy);

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double ac = a.at(i, j);
            // t11: coeff 1/hx on faces (i,j) and (i+1,j)
            d.u1_at(i, j) += ac * cx;
            d.u1_at(i + 1, j) += ac * cx;
            // t22
            d.u2_at(i, j) += ac * cy;
            d.u2_at(i, j + 1) += ac * cy;
            // t12: coeff 1/(4 hy) on u1 faces of rows jp and jm
            {
                const int jp = (j == ny - 1) ? j : j + 1;
                const int jm = (j == 0) ? j : j - 1;
                const double w = ac * 0.0625 * cy;  // (1/(4hy))^2
                d.u1_at(i, jp) += w;
                d.u1_at(i + 1, jp) += w;
                d.u1_at(i, jm) += w;
                d.u1_at(i + 1, jm) += w;
            }
            // t21
            {
                const int ip = (i == nx - 1) ? i : i + 1;
                const int im = (i == 0) ? i : i - 1;
                const double w = ac * 0.0625 * cx;
                d.u2_at(ip, j) += w;
                d.u2_at(ip, j + 1) += w;
                d.u2_at(im, j) += w;
                d.u2_at(im, j + 1) += w;
            }
        }
    }
    for (size_t k = 0; k < d.u1.size(); ++k) d.u1[k] += sigma;
    for (size_t k = 0; k < d.u2.size(); ++k) d.u2[k] += sigma;
    for (int j = 0; j < ny; ++j) {
        d.u1_at(0, j) = 1.0;
        d.u1_at(nx, j) = 1.0;
    }
    for (int i = 0; i < nx; ++i) {
        d.u2_at(i, 0) = 1.0;
        d.u2_at(i, ny) = 1.0;
    }
    return d;
}

}  // namespace bingham2d
