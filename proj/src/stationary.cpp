#include "bingham2d/stationary.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "bingham2d/convection.hpp"
#include "bingham2d/krylov.hpp"

namespace bingham2d {

void SolverControls::validate() const {
    auto check_tol = [](double t, const char* name) {
        if (!(t > 0.0) || t > 1e-2)
            throw std::invalid_argument(std::string("SolverControls: ") + name +
                                        " must lie in (0, 1e-2]");
    };
    check_tol(tol_picard, "tol_picard");
    check_tol(tol_uzawa, "tol_uzawa");
    check_tol(tol_cg, "tol_cg");
    if (max_picard < 1 || max_uzawa < 1 || max_cg < 1)
        throw std::invalid_argument("SolverControls: max iteration counts must be >= 1");
}

namespace {

void remove_mean_inplace(ScalarCellField& p) {
    double m = 0.0;
    for (double x : p.v) m += x;
    m /= (double)p.v.size();
    for (auto& x : p.v) x -= m;
}

struct ResidualParts {
    double momentum = 0.0;
    double div = 0.0;
};

ResidualParts full_residual(const Grid& g, const PhysicsParams& params, const YieldField& yield,
                            const VelocityField& rhs, double sigma, bool with_advection,
                            double M, const VelocityField& u, const ScalarCellField& p) {
    VelocityField r = energy_gradient(g, params, yield, u);
    if (sigma > 0.0) axpy_inplace(sigma, u, r);
    if (with_advection) {
        FrozenAdvection adv(g, u, M);
        adv.accumulate(g, u, r);
    }
    axpy_inplace(1.0, pressure_gradient(g, p), r);
    axpy_inplace(-1.0, rhs, r);
    r.enforce_slip();
    ResidualParts parts;
    parts.momentum = l2_norm(g, r);
    parts.div = l2_norm(g, divergence(g, u));
    return parts;
}

}  // namespace

StationarySolution solve_saddle(const Grid& g, const PhysicsParams& params,
                                const YieldField& yield, const VelocityField& rhs,
                                double sigma, bool with_advection, double M,
                                const SolverControls& controls,
                                const VelocityField* u0, const ScalarCellField* p0) {
    const auto t_start = std::chrono::steady_clock::now();
    controls.validate();
    require_same_shape(g, rhs, "solve_saddle");
    require_same_shape(g, yield.values(), "solve_saddle");
    if (with_advection && !(M > 0.0))
        throw std::invalid_argument("solve_saddle: truncation radius M must be positive");

    StationarySolution sol;
    sol.u = u0 ? *u0 : VelocityField(g);
    sol.u.enforce_slip();
    sol.p = p0 ? *p0 : ScalarCellField(g);
    remove_mean_inplace(sol.p);

    const double rhs_norm = l2_norm(g, rhs);
    const double scale = (rhs_norm > 0.0) ? rhs_norm : 1.0;
    const bool merit_mode = (sigma == 0.0) && !with_advection;
    auto merit = [&](const VelocityField& v) {
        return regularized_energy(g, params, yield, v) - dot(g, rhs, v);
    };

    SolveReport& rep = sol.report;
    auto flag_stage = [&](const char* stage) {
        if (rep.failure_stage.empty()) rep.failure_stage = stage;
    };

    double omega = 1.0;     // Picard damping
    double omega_uz = 1.0;  // pressure relaxation
    const int poisson_max = 8 * (g.nx + g.ny) + 200;

    for (int m = 0; m <= controls.max_picard; ++m) {
        const ResidualParts res = full_residual(g, params, yield, rhs, sigma,
                                                with_advection, M, sol.u, sol.p);
        rep.picard_iters = m;
        if (res.momentum <= controls.tol_picard * scale &&
            res.div <= controls.tol_uzawa * std::max(v_norm(g, sol.u), 1.0)) {
            rep.converged = true;
            break;
        }
        if (m == controls.max_picard) {
            flag_stage("picard");
            break;
        }

        const ScalarCellField a = effective_viscosity(g, params, yield, sol.u);
        const VelocityField diag = weighted_laplacian_diagonal(g, a, sigma);
        FrozenAdvection adv(g, sol.u, with_advection ? M : 0.0);
        const bool has_skew = with_advection && adv.factor() > 0.0 && l2_norm(g, sol.u) > 0.0;

        VelocityOp op = [&](const VelocityField& in, VelocityField& out) {
            TensorCellField t = velocity_gradient(g, in);
            for (size_t k = 0; k < t.cells(); ++k) {
                t.t11[k] *= a.v[k];
                t.t12[k] *= a.v[k];
                t.t21[k] *= a.v[k];
                t.t22[k] *= a.v[k];
            }
            out = gradient_adjoint(g, t);
            if (sigma > 0.0) axpy_inplace(sigma, in, out);
            if (has_skew) adv.accumulate(g, in, out);
        };

        VelocityField uhat = sol.u;
        double div_prev = -1.0;
        int stalls = 0;
        for (int l = 0; l < controls.max_uzawa; ++l) {
            VelocityField b = axpy(-1.0, pressure_gradient(g, sol.p), rhs);
            b.enforce_slip();
            KrylovResult kres = has_skew
                ? solve_bicgstab(g, op, b, uhat, diag, controls.tol_cg, controls.max_cg)
                : solve_cg(g, op, b, uhat, diag, controls.tol_cg, controls.max_cg);
            rep.cg_iters_total += kres.iters;
            if (!kres.converged) flag_stage("cg");
            rep.uzawa_iters_total += 1;

            ScalarCellField d = divergence(g, uhat);
            const double dn = l2_norm(g, d);
            if (dn <= controls.tol_uzawa * std::max(v_norm(g, uhat), 1.0)) break;
            if (l == controls.max_uzawa - 1) {
                flag_stage("uzawa");
                break;
            }

            // scaled-mass pressure update, plus a Poisson term for the
            // mass-dominated modes when sigma > 0 (Cahouet-Chabard)
            ScalarCellField dp = d;
            for (size_t k = 0; k < dp.v.size(); ++k) dp.v[k] *= a.v[k];
            if (sigma > 0.0) {
                ScalarCellField z(g);
                solve_cell_poisson(g, d, z, 1e-10, poisson_max);
                axpy_inplace(sigma, z, dp);
            }
            axpy_inplace(-omega_uz, dp, sol.p);
            remove_mean_inplace(sol.p);

            if (div_prev >= 0.0 && dn > 0.95 * div_prev) {
                if (++stalls >= 4 && omega_uz > 0.2) {
                    omega_uz *= 0.5;
                    stalls = 0;
                }
            } else {
                stalls = 0;
            }
            div_prev = dn;
        }

        VelocityField unew = sol.u;
        scale_inplace(unew, 1.0 - omega);
        axpy_inplace(omega, uhat, unew);
        if (merit_mode && omega > 0.5) {
            const double m_old = merit(sol.u);
            const double m_new = merit(unew);
            if (m_new > m_old + 1e-10 * (std::fabs(m_old) + 1.0)) {
                omega = 0.5;
                unew = sol.u;
                scale_inplace(unew, 0.5);
                axpy_inplace(0.5, uhat, unew);
            }
        }
        sol.u = unew;
    }

    remove_mean_inplace(sol.p);
    const ResidualParts final_res = full_residual(g, params, yield, rhs, sigma,
                                                  with_advection, M, sol.u, sol.p);
    rep.residual_momentum = final_res.momentum;
    rep.residual_div = final_res.div;
    rep.energy = regularized_energy(g, params, yield, sol.u);
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return sol;
}

StationarySolution solve_stationary(const StationaryProblem& problem,
                                    const VelocityField* u0, const ScalarCellField* p0) {
    if (problem.expect_boundary_zero_yield && problem.yield.boundary_max() > 0.0)
        std::fprintf(stderr,
                     "warning: yield field does not vanish on boundary-adjacent cells "
                     "(max %.3e); H2 control near the walls is not covered\n",
                     problem.yield.boundary_max());
    return solve_saddle(problem.grid, problem.params, problem.yield, problem.forcing,
                        0.0, false, 0.0, problem.controls, u0, p0);
}

ContinuationResult eps_continuation(const StationaryProblem& base,
                                    const std::vector<double>& eps_list) {
    if (eps_list.empty())
        throw std::invalid_argument("eps_continuation: epsilon list must be nonempty");
    for (size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0) || eps_list[i] > 1.0)
            throw std::invalid_argument("eps_continuation: epsilon values must lie in (0, 1]");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("eps_continuation: epsilon list must be strictly decreasing");
    }

    ContinuationResult out;
    out.eps = eps_list;
    out.yield_l1 = l1_norm(base.grid, base.yield.values());

    const VelocityField* u_warm = nullptr;
    const ScalarCellField* p_warm = nullptr;
    for (double eps : eps_list) {
        StationaryProblem p = base;
        p.params = PhysicsParams(base.params.nu, eps);
        StationarySolution sol = solve_stationary(p, u_warm, p_warm);

        ContinuationEntry entry;
        entry.epsilon = eps;
        entry.h2_semi = h2_seminorm(base.grid, sol.u);
        entry.grad_p_l2 = l2_norm(base.grid, pressure_gradient(base.grid, sol.p));
        TensorCellField lam = dual_multiplier(base.grid, p.params, sol.u);
        for (size_t k = 0; k < lam.cells(); ++k) {
            const double mag = std::sqrt(lam.t11[k] * lam.t11[k] + lam.t12[k] * lam.t12[k] +
                                         lam.t21[k] * lam.t21[k] + lam.t22[k] * lam.t22[k]);
            entry.lambda_max = std::max(entry.lambda_max, mag);
            entry.lambda_trace_inf =
                std::max(entry.lambda_trace_inf, std::fabs(lam.t11[k] + lam.t22[k]));
        }
        out.entries.push_back(entry);
        out.solutions.push_back(std::move(sol));
        u_warm = &out.solutions.back().u;
        p_warm = &out.solutions.back().p;
    }

    const size_t n = out.solutions.size();
    out.dist_sq.assign(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            VelocityField d = axpy(-1.0, out.solutions[j].u, out.solutions[i].u);
            const double h1 = h1_seminorm(base.grid, d);
            out.dist_sq[i][j] = out.dist_sq[j][i] = h1 * h1;
        }
    return out;
}

ViAuditResult audit_variational_inequality(const StationaryProblem& problem,
                                           const VelocityField& u,
                                           int n_samples, std::uint64_t seed) {
    const Grid& g = problem.grid;
    require_same_shape(g, u, "audit_variational_inequality");
    if (n_samples < 1)
        throw std::invalid_argument("audit_variational_inequality: n_samples must be >= 1");

    std::mt19937 rng((std::uint32_t)(seed ^ (seed >> 32)));
    const double scales[3] = {0.1, 1.0, 10.0};
    const double unorm = v_norm(g, u);
    const double base_scale = (unorm > 0.0) ? unorm : 1.0;

    TensorCellField gu = velocity_gradient(g, u);
    const double yield_u = weighted_gradient_l1(g, problem.yield.values(), u);
    const double nu = problem.params.nu;

    ViAuditResult out;
    out.min_slack = 0.0;  // forced sample v = u contributes exactly zero
    out.samples = n_samples + 1;

    for (int s = 0; s < n_samples; ++s) {
        VelocityField v = random_slip_field(g, rng);
        v = leray_project(g, v, 1e-13);
        const double vn = v_norm(g, v);
        if (vn > 0.0) scale_inplace(v, 1.0 / vn);
        scale_inplace(v, scales[s % 3] * base_scale);

        VelocityField w = axpy(-1.0, u, v);  // v - u
        TensorCellField gw = velocity_gradient(g, w);
        const double slack = nu * dot(g, gu, gw) +
                             weighted_gradient_l1(g, problem.yield.values(), v) - yield_u -
                             dot(g, problem.forcing, w);
        out.min_slack = std::min(out.min_slack, slack);
        out.max_test_distance = std::max(out.max_test_distance, v_norm(g, w));
    }
    return out;
}

}  // namespace bingham2d
