#include "bingham2d/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "bingham2d/convection.hpp"
#include "bingham2d/evolution.hpp"
#include "bingham2d/frame.hpp"
#include "bingham2d/io.hpp"
#include "bingham2d/operators.hpp"
#include "json.hpp"

namespace bingham2d {

namespace {

using nlohmann::json;

int solver_threads() {
    const char* env = std::getenv("BINGHAM_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n < 1 ? 1 : n;
}

VelocityField sample_forcing(const Grid& g, const RunConfig& cfg, double t) {
    return sample_velocity(
        g, [&](double x, double y) { return cfg.forcing_u1.eval(x, y, t); },
        [&](double x, double y) { return cfg.forcing_u2.eval(x, y, t); });
}

ScalarCellField sample_yield_values(const Grid& g, const RunConfig& cfg, double t) {
    return sample_cells(g, [&](double x, double y) { return cfg.yield_expr.eval(x, y, t); });
}

VelocityField sample_initial(const Grid& g, const RunConfig& cfg) {
    if (!cfg.initial_u1) {
        VelocityField u(g);
        return u;
    }
    VelocityField u = sample_velocity(
        g, [&](double x, double y) { return cfg.initial_u1->eval(x, y, 0.0); },
        [&](double x, double y) { return cfg.initial_u2->eval(x, y, 0.0); });
    // initial data lives in the divergence-free space
    return leray_project(g, u);
}

json report_json(const SolveReport& r) {
    return json{{"picard_iters", r.picard_iters},
                {"uzawa_iters_total", r.uzawa_iters_total},
                {"cg_iters_total", r.cg_iters_total},
                {"residual_momentum", r.residual_momentum},
                {"residual_div", r.residual_div},
                {"energy", r.energy},
                {"wall_time_s", r.wall_time_s},
                {"converged", r.converged},
                {"failure_stage", r.failure_stage}};
}

struct MultiplierDiag {
    double lambda_max = 0.0;
    double trace_inf = 0.0;
    double complementarity_rel = 0.0;  // worst |g l:G - g|G|| / (g|G|) where |G| >= 100 eps
    int active_cells = 0;
};

MultiplierDiag multiplier_diagnostics(const Grid& g, const PhysicsParams& params,
                                      const YieldField& yield, const VelocityField& u) {
    MultiplierDiag d;
    const TensorCellField grad = velocity_gradient(g, u);
    const TensorCellField lam = dual_multiplier(g, params, u);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t c = grad.idx(i, j);
            const double l11 = lam.t11[c], l12 = lam.t12[c], l21 = lam.t21[c], l22 = lam.t22[c];
            const double lmag = std::sqrt(l11 * l11 + l12 * l12 + l21 * l21 + l22 * l22);
            d.lambda_max = std::max(d.lambda_max, lmag);
            d.trace_inf = std::max(d.trace_inf, std::fabs(l11 + l22));
            const double g11 = grad.t11[c], g12 = grad.t12[c], g21 = grad.t21[c],
                         g22 = grad.t22[c];
            const double gmag =
                std::sqrt(g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22);
            const double gc = yield.values().v[c];
            if (gmag >= 100.0 * params.epsilon && gc > 0.0 && gmag > 0.0) {
                const double contraction = l11 * g11 + l12 * g12 + l21 * g21 + l22 * g22;
                const double rel = std::fabs(gc * contraction - gc * gmag) / (gc * gmag);
                d.complementarity_rel = std::max(d.complementarity_rel, rel);
                ++d.active_cells;
            }
        }
    return d;
}

struct ErrorTable {
    double u_l2 = 0.0;
    double u_h1 = 0.0;
    double u_l2_rel = 0.0;
    double p_l2 = -1.0;  // negative when no pressure reference was given
};

ErrorTable error_vs_analytic(const Grid& g, const AnalyticSolution& sol, double t,
                             const VelocityField& u, const ScalarCellField& p) {
    ErrorTable e;
    VelocityField ref = sample_velocity(
        g, [&](double x, double y) { return sol.u1.eval(x, y, t); },
        [&](double x, double y) { return sol.u2.eval(x, y, t); });
    VelocityField diff = axpy(-1.0, ref, u);
    e.u_l2 = l2_norm(g, diff);
    e.u_h1 = h1_seminorm(g, diff);
    const double ref_l2 = l2_norm(g, ref);
    e.u_l2_rel = ref_l2 > 0.0 ? e.u_l2 / ref_l2 : e.u_l2;
    if (sol.p) {
        ScalarCellField pref = sample_cells(g, [&](double x, double y) { return sol.p->eval(x, y, t); });
        const double shift = mean(g, pref);
        for (double& v : pref.v) v -= shift;
        ScalarCellField pdiff = axpy(-1.0, pref, p);
        e.p_l2 = l2_norm(g, pdiff);
    }
    return e;
}

json error_json(const ErrorTable& e) {
    json j{{"u_l2", e.u_l2}, {"u_h1", e.u_h1}, {"u_l2_rel", e.u_l2_rel}};
    if (e.p_l2 >= 0.0) j["p_l2"] = e.p_l2;
    return j;
}

StationaryProblem build_stationary(const RunConfig& cfg, int nx, int ny) {
    Grid g(cfg.lx, cfg.ly, nx, ny);
    StationaryProblem prob{g,
                           PhysicsParams(cfg.nu, cfg.epsilon),
                           YieldField(sample_yield_values(g, cfg, 0.0)),
                           sample_forcing(g, cfg, 0.0),
                           cfg.controls,
                           cfg.yield_vanishes_on_boundary};
    return prob;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

int run_stationary(const RunConfig& cfg) {
    StationaryProblem prob = build_stationary(cfg, cfg.nx, cfg.ny);
    const Grid& g = prob.grid;
    StationarySolution sol = solve_stationary(prob);

    write_velocity_csv(cfg.out_dir + "/velocity.csv", g, sol.u);
    write_scalar_csv(cfg.out_dir + "/pressure.csv", g, sol.p);
    write_scalar_csv(cfg.out_dir + "/yield.csv", g, prob.yield.values());

    json rep = report_json(sol.report);
    const double f_l2 = l2_norm(g, prob.forcing);
    const double g_l2 = l2_norm(g, prob.yield.values());
    const double p_l2 = l2_norm(g, sol.p);
    rep["pressure_over_data"] = (f_l2 + g_l2) > 0.0 ? p_l2 / (f_l2 + g_l2) : 0.0;
    rep["grad_p_l2"] = l2_norm(g, pressure_gradient(g, sol.p));

    const MultiplierDiag md = multiplier_diagnostics(g, prob.params, prob.yield, sol.u);
    rep["lambda_max"] = md.lambda_max;
    rep["lambda_trace_inf"] = md.trace_inf;
    rep["complementarity_rel"] = md.complementarity_rel;
    rep["complementarity_cells"] = md.active_cells;

    const ViAuditResult vi =
        audit_variational_inequality(prob, sol.u, cfg.vi_samples, cfg.seed);
    const double yield_l1 = l1_norm(g, prob.yield.values());
    const double vi_threshold =
        -(prob.params.epsilon * yield_l1 +
          10.0 * cfg.controls.tol_picard * f_l2 * std::max(vi.max_test_distance, 1.0));
    rep["vi_min_slack"] = vi.min_slack;
    rep["vi_threshold"] = vi_threshold;
    rep["vi_samples"] = vi.samples;
    rep["vi_pass"] = vi.min_slack >= vi_threshold;

    if (cfg.analytic) rep["errors"] = error_json(error_vs_analytic(g, *cfg.analytic, 0.0, sol.u, sol.p));

    write_json(cfg.out_dir + "/report.json", rep);
    return sol.report.converged ? 0 : 2;
}

int run_eps_study(const RunConfig& cfg) {
    StationaryProblem base = build_stationary(cfg, cfg.nx, cfg.ny);
    const Grid& g = base.grid;
    ContinuationResult res = eps_continuation(base, cfg.eps_list);

    const double f_l2 = l2_norm(g, base.forcing);
    std::string csv = "eps_i,eps_j,dist_sq,bound,pass\n";
    bool all_pairs_ok = true;
    for (std::size_t i = 0; i < res.eps.size(); ++i)
        for (std::size_t j = i + 1; j < res.eps.size(); ++j) {
            const double dist_sq = res.dist_sq[i][j];
            const double vi = v_norm(g, res.solutions[i].u);
            const double vj = v_norm(g, res.solutions[j].u);
            const double bound = (1.1 * std::fabs(res.eps[i] - res.eps[j]) * res.yield_l1 +
                                  10.0 * cfg.controls.tol_picard * f_l2 * (vi + vj)) /
                                 cfg.nu;
            const bool pass = dist_sq <= bound;
            all_pairs_ok = all_pairs_ok && pass;
            csv += format_double(res.eps[i]) + "," + format_double(res.eps[j]) + "," +
                   format_double(dist_sq) + "," + format_double(bound) + "," +
                   (pass ? "1" : "0") + "\n";
        }
    write_text(cfg.out_dir + "/eps_study.csv", csv);

    write_velocity_csv(cfg.out_dir + "/velocity.csv", g, res.solutions.back().u);
    write_scalar_csv(cfg.out_dir + "/pressure.csv", g, res.solutions.back().p);
    write_scalar_csv(cfg.out_dir + "/yield.csv", g, base.yield.values());

    json rep;
    rep["rate_law_pass"] = all_pairs_ok;
    rep["yield_l1"] = res.yield_l1;
    json entries = json::array();
    bool all_converged = true;
    for (std::size_t i = 0; i < res.eps.size(); ++i) {
        const ContinuationEntry& e = res.entries[i];
        json je{{"epsilon", e.epsilon},
                {"h2_semi", e.h2_semi},
                {"grad_p_l2", e.grad_p_l2},
                {"lambda_max", e.lambda_max},
                {"lambda_trace_inf", e.lambda_trace_inf}};
        je["report"] = report_json(res.solutions[i].report);
        all_converged = all_converged && res.solutions[i].report.converged;
        entries.push_back(je);
    }
    rep["entries"] = entries;
    if (res.entries.size() >= 2 && res.entries.front().h2_semi > 0.0)
        rep["h2_last_over_first"] = res.entries.back().h2_semi / res.entries.front().h2_semi;
    write_json(cfg.out_dir + "/report.json", rep);
    return all_converged ? 0 : 2;
}

int run_grid_study(const RunConfig& cfg) {
    std::vector<std::pair<int, int>> levels;
    for (int k = 0; k < cfg.levels; ++k)
        levels.push_back({cfg.nx << k, cfg.ny << k});

    std::vector<StationarySolution> sols(levels.size());
    std::vector<ErrorTable> errs(levels.size());

    // independent solves may fan out; each level's state is its own
    const int threads = std::min<int>(solver_threads(), static_cast<int>(levels.size()));
    std::vector<std::string> level_error(levels.size());
    auto solve_level = [&](std::size_t k) {
        try {
            StationaryProblem prob = build_stationary(cfg, levels[k].first, levels[k].second);
            sols[k] = solve_stationary(prob);
            if (cfg.analytic)
                errs[k] = error_vs_analytic(prob.grid, *cfg.analytic, 0.0, sols[k].u, sols[k].p);
        } catch (const std::exception& e) {
            level_error[k] = e.what();
        }
    };
    if (threads <= 1) {
        for (std::size_t k = 0; k < levels.size(); ++k) solve_level(k);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t k = t; k < levels.size(); k += threads) solve_level(k);
            });
        for (std::thread& th : pool) th.join();
    }
    for (const std::string& msg : level_error)
        if (!msg.empty()) throw ConfigError(msg);

    std::string csv = "level,nx,ny,err_u_l2,err_u_h1,err_p_l2,order_u_l2,order_u_h1\n";
    bool all_converged = true;
    json jlevels = json::array();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        all_converged = all_converged && sols[k].report.converged;
        std::string order_l2 = "", order_h1 = "";
        if (cfg.analytic && k + 1 < levels.size()) {
            if (errs[k + 1].u_l2 > 0.0)
                order_l2 = format_double(std::log2(errs[k].u_l2 / errs[k + 1].u_l2));
            if (errs[k + 1].u_h1 > 0.0)
                order_h1 = format_double(std::log2(errs[k].u_h1 / errs[k + 1].u_h1));
        }
        csv += std::to_string(k) + "," + std::to_string(levels[k].first) + "," +
               std::to_string(levels[k].second) + "," + format_double(errs[k].u_l2) + "," +
               format_double(errs[k].u_h1) + "," + format_double(errs[k].p_l2) + "," +
               order_l2 + "," + order_h1 + "\n";
        json jl{{"nx", levels[k].first},
                {"ny", levels[k].second},
                {"report", report_json(sols[k].report)}};
        if (cfg.analytic) jl["errors"] = error_json(errs[k]);
        if (!order_l2.empty()) jl["order_u_l2"] = std::stod(order_l2);
        if (!order_h1.empty()) jl["order_u_h1"] = std::stod(order_h1);
        jlevels.push_back(jl);
    }
    write_text(cfg.out_dir + "/grid_study.csv", csv);

    const auto& fine = sols.back();
    {
        Grid gf(cfg.lx, cfg.ly, levels.back().first, levels.back().second);
        write_velocity_csv(cfg.out_dir + "/velocity.csv", gf, fine.u);
        write_scalar_csv(cfg.out_dir + "/pressure.csv", gf, fine.p);
    }
    json rep;
    rep["levels"] = jlevels;
    write_json(cfg.out_dir + "/report.json", rep);
    return all_converged ? 0 : 2;
}

std::string snapshot_name(const char* prefix, int k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%05d.csv", prefix, k);
    return buf;
}

int run_evolve(const RunConfig& cfg) {
    Grid g(cfg.lx, cfg.ly, cfg.nx, cfg.ny);
    EvolutionProblem prob{
        g,
        PhysicsParams(cfg.nu, cfg.epsilon),
        [g, cfg](double t) { return sample_forcing(g, cfg, t); },
        [g, cfg](double t) { return sample_yield_values(g, cfg, t); },
        sample_initial(g, cfg),
        cfg.horizon,
        cfg.steps,
        cfg.convection_cap,
        cfg.controls,
        cfg.store_stride,
        false};
    // The yield sampler above returns raw values; nonnegativity is enforced
    // per step when the YieldField is built inside evolve.
    EvolveResult res = evolve(prob);

    std::string csv =
        "k,t,u_l2_sq,du_l2_sq,visc_v_sq_dt,yield_dt,dudt_l2_sq,grad_du_sq,subgrad_l2_sq,"
        "h2_full_sq,h1_semi_sq,yield_term,f_l2_sq,g_h1_sq,dg_l2,picard_iters,converged\n";
    bool all_converged = res.completed;
    for (const LedgerRow& r : res.ledger.rows) {
        all_converged = all_converged && r.step.converged;
        csv += std::to_string(r.k) + "," + format_double(r.t) + "," + format_double(r.u_l2_sq) +
               "," + format_double(r.du_l2_sq) + "," + format_double(r.visc_v_sq_dt) + "," +
               format_double(r.yield_dt) + "," + format_double(r.dudt_l2_sq) + "," +
               format_double(r.grad_du_sq) + "," + format_double(r.subgrad_l2_sq) + "," +
               format_double(r.h2_full_sq) + "," + format_double(r.h1_semi_sq) + "," +
               format_double(r.yield_term) + "," + format_double(r.f_l2_sq) + "," +
               format_double(r.g_h1_sq) + "," + format_double(r.dg_l2) + "," +
               std::to_string(r.step.picard_iters) + "," + (r.step.converged ? "1" : "0") + "\n";
    }
    write_text(cfg.out_dir + "/ledger.csv", csv);

    ensure_dir(cfg.out_dir + "/trajectory");
    for (std::size_t s = 0; s < res.trajectory.snap_k.size(); ++s) {
        const int k = res.trajectory.snap_k[s];
        write_velocity_csv(cfg.out_dir + "/trajectory/" + snapshot_name("velocity", k), g,
                           res.trajectory.u[s]);
        if (s > 0)
            write_scalar_csv(cfg.out_dir + "/trajectory/" + snapshot_name("pressure", k), g,
                             res.trajectory.p[s - 1]);
    }

    const ScalarCellField g0 = sample_yield_values(g, cfg, 0.0);
    const LedgerAudit audit = audit_ledger(g, prob.params, prob.u0, g0, res.ledger);
    const TstarEstimate ts =
        estimate_tstar(g, prob.params, prob.u0, g0, res.ledger, cfg.c_user, cfg.dim2_global);
    write_json(cfg.out_dir + "/tstar.json",
               json{{"t_star", ts.t_star},
                    {"y0", ts.y0},
                    {"T", cfg.horizon},
                    {"dim2_global", cfg.dim2_global},
                    {"c_user", cfg.c_user}});

    json rep;
    rep["completed"] = res.completed;
    rep["aborted_at_step"] = res.aborted_at_step;
    rep["steps"] = cfg.steps;
    rep["audit"] = json{{"lhs_energy", audit.lhs_energy},
                        {"rhs_energy", audit.rhs_energy},
                        {"ratio_energy", audit.ratio_energy},
                        {"lhs_strong", audit.lhs_strong},
                        {"rhs_strong", audit.rhs_strong},
                        {"ratio_strong", audit.ratio_strong},
                        {"lhs_increment", audit.lhs_increment},
                        {"rhs_increment", audit.rhs_increment},
                        {"ratio_increment", audit.ratio_increment}};
    if (cfg.store_stride == 1) {
        const auto gap = interpolant_gap_identity(res.trajectory);
        rep["interpolant_gap"] = json{{"lhs", gap.first}, {"rhs", gap.second}};
    }
    if (!res.trajectory.u.empty()) {
        rep["final_u_l2"] = l2_norm(g, res.trajectory.final_u());
        rep["final_u_h1"] = h1_seminorm(g, res.trajectory.final_u());
    }
    if (cfg.analytic && res.completed)
        rep["errors"] = error_json(error_vs_analytic(
            g, *cfg.analytic, cfg.horizon, res.trajectory.final_u(),
            res.trajectory.p.empty() ? ScalarCellField(g) : res.trajectory.p.back()));
    write_json(cfg.out_dir + "/report.json", rep);
    return all_converged ? 0 : 2;
}

HeightFunction build_height(const FrameConfig& fc) {
    const int sdim = fc.dim - 1;
    if (!fc.rho_poly.empty()) return HeightFunction::polynomial(sdim, fc.rho_poly);
    const Expr expr = *fc.rho_expr;
    return HeightFunction::from_callable(sdim, [expr, sdim](const Eigen::VectorXd& yp) {
        return expr.eval(yp[0], sdim == 2 ? yp[1] : 0.0, 0.0);
    });
}

int run_frame_check(const RunConfig& cfg) {
    const HeightFunction rho = build_height(cfg.frame);
    const int sdim = rho.surface_dim();
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> box(-cfg.frame.extent, cfg.frame.extent);

    FrameIdentityReport worst;
    for (int s = 0; s < cfg.frame.samples; ++s) {
        Eigen::VectorXd yp(sdim);
        if (s == 0)
            yp.setZero();  // the chart anchor is always probed
        else
            for (int d = 0; d < sdim; ++d) yp[d] = box(rng);
        const FrameIdentityReport r = check_frame_identities(rho, yp);
        worst.inverse_residual = std::max(worst.inverse_residual, r.inverse_residual);
        worst.symmetry_residual = std::max(worst.symmetry_residual, r.symmetry_residual);
        worst.psi_normal_residual = std::max(worst.psi_normal_residual, r.psi_normal_residual);
        worst.phi_normal_residual = std::max(worst.phi_normal_residual, r.phi_normal_residual);
        worst.tangency_residual = std::max(worst.tangency_residual, r.tangency_residual);
        worst.roundtrip_residual = std::max(worst.roundtrip_residual, r.roundtrip_residual);
    }
    const double tol = rho.derivative_tolerance();
    const bool pass = worst.max_residual() <= tol;
    write_json(cfg.out_dir + "/frame_report.json",
               json{{"d", cfg.frame.dim},
                    {"samples", cfg.frame.samples},
                    {"extent", cfg.frame.extent},
                    {"tolerance", tol},
                    {"analytic_derivatives", rho.analytic()},
                    {"max_residuals",
                     json{{"inverse", worst.inverse_residual},
                          {"symmetry", worst.symmetry_residual},
                          {"psi_normal", worst.psi_normal_residual},
                          {"phi_normal", worst.phi_normal_residual},
                          {"tangency", worst.tangency_residual},
                          {"roundtrip", worst.roundtrip_residual}}},
                    {"pass", pass}});
    return pass ? 0 : 2;
}

}  // namespace

int run_config(const RunConfig& cfg) {
    try {
        ensure_dir(cfg.out_dir);
        switch (cfg.mode) {
            case RunMode::Stationary:
                return run_stationary(cfg);
            case RunMode::Evolve:
                return run_evolve(cfg);
            case RunMode::EpsStudy:
                return run_eps_study(cfg);
            case RunMode::GridStudy:
                return run_grid_study(cfg);
            case RunMode::FrameCheck:
                return run_frame_check(cfg);
        }
        std::fprintf(stderr, "error: unknown run mode\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace bingham2d
