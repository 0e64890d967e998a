#include "bingham2d/evolution.hpp"

#include <cmath>

namespace bingham2d {

namespace {

// 4-point Gauss-Legendre nodes and weights on [-1, 1]
constexpr double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461,
                               0.6521451548625461, 0.3478548451374538};

double scalar_h1_sq(const Grid& g, const ScalarCellField& p) {
    // centered differences inside, one-sided at the boundary cells
    double s = 0.0;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double dx, dy;
            if (i == 0)
                dx = (p.at(1, j) - p.at(0, j)) * ihx;
            else if (i == g.nx - 1)
                dx = (p.at(g.nx - 1, j) - p.at(g.nx - 2, j)) * ihx;
            else
                dx = (p.at(i + 1, j) - p.at(i - 1, j)) * (0.5 * ihx);
            if (j == 0)
                dy = (p.at(i, 1) - p.at(i, 0)) * ihy;
            else if (j == g.ny - 1)
                dy = (p.at(i, g.ny - 1) - p.at(i, g.ny - 2)) * ihy;
            else
                dy = (p.at(i, j + 1) - p.at(i, j - 1)) * (0.5 * ihy);
            s += dx * dx + dy * dy;
        }
    const double l2 = l2_norm(g, p);
    return l2 * l2 + g.cell_area() * s;
}

}  // namespace

VelocityField time_average(const Grid& g, const VelocitySampler& f, int k, double h) {
    if (k == 0) {
        VelocityField v = f(0.0);
        require_same_shape(g, v, "time_average");
        v.enforce_slip();
        return v;
    }
    const double a = (k - 1) * h, b = k * h;
    VelocityField acc(g);
    for (int q = 0; q < 4; ++q) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[q];
        VelocityField v = f(t);
        require_same_shape(g, v, "time_average");
        axpy_inplace(0.5 * kGaussW[q], v, acc);  // (1/h) * (b-a)/2 * w = w/2
    }
    acc.enforce_slip();
    return acc;
}

ScalarCellField time_average(const Grid& g, const ScalarSampler& f, int k, double h) {
    if (k == 0) {
        ScalarCellField v = f(0.0);
        require_same_shape(g, v, "time_average");
        return v;
    }
    const double a = (k - 1) * h, b = k * h;
    ScalarCellField acc(g);
    for (int q = 0; q < 4; ++q) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[q];
        ScalarCellField v = f(t);
        require_same_shape(g, v, "time_average");
        axpy_inplace(0.5 * kGaussW[q], v, acc);
    }
    return acc;
}

void EvolutionProblem::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("EvolutionProblem: T must be positive");
    if (N < 1) throw std::invalid_argument("EvolutionProblem: N must be >= 1");
    if (!(M > 0.0)) throw std::invalid_argument("EvolutionProblem: M must be positive");
    if (store_stride < 1)
        throw std::invalid_argument("EvolutionProblem: store_stride must be >= 1");
    require_same_shape(grid, u0, "EvolutionProblem");
    if (u0.max_normal_trace() > 0.0)
        throw std::invalid_argument("EvolutionProblem: u0 must satisfy u.n = 0 on the walls");
    controls.validate();
    if (strong_initial_check) {
        // wall-adjacent tangential shear of u0 should vanish to O(h)
        ScalarCellField u1c, u2c;
        average_to_centers(grid, u0, u1c, u2c);
        const double href = std::max(grid.hx, grid.hy);
        double r = 0.0;
        for (int i = 0; i < grid.nx; ++i) {
            r = std::max(r, std::fabs(u1c.at(i, 1) - u1c.at(i, 0)) / grid.hy);
            r = std::max(r, std::fabs(u1c.at(i, grid.ny - 1) - u1c.at(i, grid.ny - 2)) / grid.hy);
        }
        for (int j = 0; j < grid.ny; ++j) {
            r = std::max(r, std::fabs(u2c.at(1, j) - u2c.at(0, j)) / grid.hx);
            r = std::max(r, std::fabs(u2c.at(grid.nx - 1, j) - u2c.at(grid.nx - 2, j)) / grid.hx);
        }
        const double scale = 1.0 + linf_norm(u0);
        if (r > 10.0 * href * scale)
            throw std::invalid_argument(
                "EvolutionProblem: u0 violates the slip shear condition at the walls");
    }
}

StepResult rothe_step(const Grid& g, const PhysicsParams& params,
                      const VelocityField& u_prev, const VelocityField& f_k,
                      const YieldField& g_k, double h, double M,
                      const SolverControls& controls, const ScalarCellField* p_warm) {
    if (!(h > 0.0)) throw std::invalid_argument("rothe_step: step size must be positive");
    VelocityField rhs = f_k;
    rhs.enforce_slip();
    axpy_inplace(1.0 / h, u_prev, rhs);
    StationarySolution sol =
        solve_saddle(g, params, g_k, rhs, 1.0 / h, true, M, controls, &u_prev, p_warm);
    return StepResult{std::move(sol.u), std::move(sol.p), sol.report};
}

VelocityField Trajectory::eval_linear(double t) const {
    if (stride != 1 || (int)u.size() != N + 1)
        throw std::logic_error("Trajectory::eval_linear requires stride-1 snapshots");
    const double h = T / N;
    double s = t / h;
    if (s <= 0.0) return u.front();
    if (s >= (double)N) return u.back();
    const int k = (int)s;
    const double w = s - k;
    VelocityField r = u[k];
    scale_inplace(r, 1.0 - w);
    axpy_inplace(w, u[k + 1], r);
    return r;
}

const VelocityField& Trajectory::eval_const(double t) const {
    if (stride != 1 || (int)u.size() != N + 1)
        throw std::logic_error("Trajectory::eval_const requires stride-1 snapshots");
    if (t <= 0.0) return u.front();
    const double h = T / N;
    int k = (int)std::ceil(t / h - 1e-12);
    if (k < 0) k = 0;
    if (k > N) k = N;
    return u[k];
}

EvolveResult evolve(const EvolutionProblem& problem) {
    problem.validate();
    const Grid& g = problem.grid;
    const double h = problem.T / problem.N;

    EvolveResult out;
    out.ledger.T = problem.T;
    out.ledger.N = problem.N;
    out.trajectory.grid = g;
    out.trajectory.T = problem.T;
    out.trajectory.N = problem.N;
    out.trajectory.stride = problem.store_stride;
    out.trajectory.snap_k.push_back(0);
    out.trajectory.u.push_back(problem.u0);

    VelocityField u_prev = problem.u0;
    ScalarCellField p_prev(g);
    ScalarCellField g_prev = time_average(g, problem.yield, 0, h);  // g(0)
    int consecutive_failures = 0;

    for (int k = 1; k <= problem.N; ++k) {
        const VelocityField f_k = time_average(g, problem.forcing, k, h);
        const ScalarCellField g_k_values = time_average(g, problem.yield, k, h);
        const YieldField g_k(g_k_values);

        StepResult step = rothe_step(g, problem.params, u_prev, f_k, g_k, h,
                                     problem.M, problem.controls, &p_prev);

        LedgerRow row;
        row.k = k;
        row.t = k * h;
        const double u_l2 = l2_norm(g, step.u);
        row.u_l2_sq = u_l2 * u_l2;
        VelocityField du = axpy(-1.0, u_prev, step.u);
        const double du_l2 = l2_norm(g, du);
        row.du_l2_sq = du_l2 * du_l2;
        const double vn = v_norm(g, step.u);
        row.visc_v_sq_dt = problem.params.nu * vn * vn * h;
        row.yield_term = weighted_gradient_l1(g, g_k_values, step.u);
        row.yield_dt = row.yield_term * h;
        row.dudt_l2_sq = (du_l2 / h) * (du_l2 / h);
        const double gdu = h1_seminorm(g, du);
        row.grad_du_sq = gdu * gdu;
        const double h1 = h1_seminorm(g, step.u);
        row.h1_semi_sq = h1 * h1;
        VelocityField subgrad = energy_gradient(g, problem.params, g_k, step.u);
        axpy_inplace(1.0, pressure_gradient(g, step.p), subgrad);
        subgrad.enforce_slip();
        const double sg = l2_norm(g, subgrad);
        row.subgrad_l2_sq = sg * sg;
        const double h2s = h2_seminorm(g, step.u);
        row.h2_full_sq = u_l2 * u_l2 + h1 * h1 + h2s * h2s;
        const double f_l2 = l2_norm(g, f_k);
        row.f_l2_sq = f_l2 * f_l2;
        row.g_h1_sq = scalar_h1_sq(g, g_k_values);
        ScalarCellField dg = axpy(-1.0, g_prev, g_k_values);
        row.dg_l2 = l2_norm(g, dg) / h;
        row.step = step.report;
        out.ledger.rows.push_back(row);

        if (!step.report.converged) {
            if (++consecutive_failures >= 3) {
                out.aborted_at_step = k - consecutive_failures + 1;
                out.completed = false;
                u_prev = std::move(step.u);
                p_prev = std::move(step.p);
                if (out.trajectory.snap_k.back() != k) {
                    out.trajectory.snap_k.push_back(k);
                    out.trajectory.u.push_back(u_prev);
                    out.trajectory.p.push_back(p_prev);
                }
                return out;
            }
        } else {
            consecutive_failures = 0;
        }

        u_prev = std::move(step.u);
        p_prev = std::move(step.p);
        g_prev = g_k_values;
        if (k % problem.store_stride == 0 || k == problem.N) {
            out.trajectory.snap_k.push_back(k);
            out.trajectory.u.push_back(u_prev);
            out.trajectory.p.push_back(p_prev);
        }
    }
    out.completed = true;
    return out;
}

LedgerAudit audit_ledger(const Grid& g, const PhysicsParams& params,
                         const VelocityField& u0, const ScalarCellField& g0,
                         const EnergyLedger& ledger) {
    LedgerAudit a;
    const double h = (ledger.N > 0) ? ledger.T / ledger.N : 0.0;

    const double u0_l2 = l2_norm(g, u0);
    const double u0_h1 = h1_seminorm(g, u0);
    const double g0_l2 = l2_norm(g, g0);

    double sum_du = 0.0, sum_visc = 0.0, sum_yield = 0.0;
    double sum_f = 0.0, sum_gh1 = 0.0, sum_dg = 0.0;
    double sum_strong = 0.0, sum_grad_du = 0.0;
    for (const LedgerRow& r : ledger.rows) {
        sum_du += r.du_l2_sq;
        sum_visc += r.visc_v_sq_dt;
        sum_yield += r.yield_dt;
        a.lhs_energy = std::max(a.lhs_energy, r.u_l2_sq + sum_du + sum_visc + sum_yield);

        sum_strong += (r.subgrad_l2_sq + r.h2_full_sq + r.dudt_l2_sq) * h;
        a.lhs_strong =
            std::max(a.lhs_strong, params.nu * r.h1_semi_sq + r.yield_term + sum_strong);

        sum_grad_du += r.grad_du_sq;
        sum_f += r.f_l2_sq * h;
        sum_gh1 += r.g_h1_sq * h;
        sum_dg += r.dg_l2 * h;
    }
    a.lhs_increment = sum_grad_du;

    a.rhs_energy = u0_l2 * u0_l2 + sum_f;
    const double phi0 = 0.5 * params.nu * u0_h1 * u0_h1 +
                        weighted_gradient_l1(g, g0, u0);
    a.rhs_strong = 1.0 + phi0 + sum_f + sum_gh1 + sum_dg;
    const double g_w11 = g0_l2 + sum_dg;
    a.rhs_increment = u0_h1 * u0_h1 + sum_f + sum_gh1 + g_w11 * g_w11;

    a.ratio_energy = (a.rhs_energy > 0.0) ? a.lhs_energy / a.rhs_energy : 0.0;
    a.ratio_strong = (a.rhs_strong > 0.0) ? a.lhs_strong / a.rhs_strong : 0.0;
    a.ratio_increment = (a.rhs_increment > 0.0) ? a.lhs_increment / a.rhs_increment : 0.0;
    return a;
}

std::pair<double, double> interpolant_gap_identity(const Trajectory& traj) {
    if (traj.stride != 1 || (int)traj.u.size() != traj.N + 1)
        throw std::logic_error("interpolant_gap_identity requires stride-1 snapshots");
    const Grid& g = traj.grid;
    const double h = traj.T / traj.N;

    // 2-point Gauss per interval is exact: the integrand is quadratic in t
    const double q0 = 0.5 - 0.5 / std::sqrt(3.0);
    const double q1 = 0.5 + 0.5 / std::sqrt(3.0);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 1; k <= traj.N; ++k) {
        VelocityField du = axpy(-1.0, traj.u[k - 1], traj.u[k]);
        const double gd = h1_seminorm(g, du);
        rhs += (gd * gd) / h / 3.0 * h * h;  // (h^2/3) |grad(du/h)|^2 h
        for (double s : {q0, q1}) {
            // u_lin - u_const = (s - 1) * du at t = t_{k-1} + s h
            const double w = (s - 1.0) * gd;
            lhs += 0.5 * h * w * w;
        }
    }
    return {lhs, rhs};
}

TstarEstimate estimate_tstar(const Grid& g, const PhysicsParams& params,
                             const VelocityField& u0, const ScalarCellField& g0,
                             const EnergyLedger& ledger, double c_user,
                             bool dim2_global) {
    if (!(c_user > 0.0))
        throw std::invalid_argument("estimate_tstar: c_user must be positive");
    TstarEstimate est;
    const double u0_h1 = h1_seminorm(g, u0);
    est.y0 = 0.5 * params.nu * u0_h1 * u0_h1 + weighted_gradient_l1(g, g0, u0) + 1.0;
    if (dim2_global) {
        est.t_star = ledger.T;
        return est;
    }
    const double h = (ledger.N > 0) ? ledger.T / ledger.N : 0.0;
    double integral = 0.0;
    double t_star = 0.0;
    for (const LedgerRow& r : ledger.rows) {
        const double a_k = c_user * (r.f_l2_sq + r.g_h1_sq + r.dg_l2 + r.h1_semi_sq);
        integral += a_k * h;
        if (est.y0 * integral <= 0.5)
            t_star = r.t;
        else
            break;
    }
    est.t_star = t_star;
    return est;
}

}  // namespace bingham2d
