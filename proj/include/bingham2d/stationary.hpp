#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bingham2d/energy.hpp"
#include "bingham2d/grid.hpp"

namespace bingham2d {

struct SolverControls {
    double tol_picard = 1e-9;
    double tol_uzawa = 1e-9;
    double tol_cg = 1e-11;
    int max_picard = 200;
    int max_uzawa = 5000;
    int max_cg = 20000;

    void validate() const;
};

struct SolveReport {
    int picard_iters = 0;
    long uzawa_iters_total = 0;
    long cg_iters_total = 0;
    double residual_momentum = 0.0;  // recomputed from the returned (u, p)
    double residual_div = 0.0;
    double energy = 0.0;
    double wall_time_s = 0.0;
    bool converged = false;
    std::string failure_stage;  // empty, or first of "picard" / "uzawa" / "cg"
};

struct StationaryProblem {
    Grid grid;
    PhysicsParams params;
    YieldField yield;
    VelocityField forcing;
    SolverControls controls;
    bool expect_boundary_zero_yield = false;
};

struct StationarySolution {
    VelocityField u;
    ScalarCellField p;
    SolveReport report;
};

// Shared Picard/Uzawa engine for sigma*u + dJ(u) + theta*B_skew(u,u) +
// grad p = rhs, div u = 0.  sigma = 0 and advection off recovers the
// stationary problem.  Warm starts are taken from (u0, p0) when given.
StationarySolution solve_saddle(const Grid& g, const PhysicsParams& params,
                                const YieldField& yield, const VelocityField& rhs,
                                double sigma, bool with_advection, double M,
                                const SolverControls& controls,
                                const VelocityField* u0 = nullptr,
                                const ScalarCellField* p0 = nullptr);

StationarySolution solve_stationary(const StationaryProblem& problem,
                                    const VelocityField* u0 = nullptr,
                                    const ScalarCellField* p0 = nullptr);

struct ContinuationEntry {
    double epsilon = 0.0;
    double h2_semi = 0.0;
    double grad_p_l2 = 0.0;
    double lambda_max = 0.0;
    double lambda_trace_inf = 0.0;
};

struct ContinuationResult {
    std::vector<double> eps;
    std::vector<StationarySolution> solutions;
    std::vector<ContinuationEntry> entries;
    // dist_sq[i][j] = h1_seminorm(u_i - u_j)^2 for i < j
    std::vector<std::vector<double>> dist_sq;
    double yield_l1 = 0.0;  // ||g||_{L1,h}
};

// Solves the same data for each epsilon in the strictly decreasing list,
// warm-starting from the previous solution.
ContinuationResult eps_continuation(const StationaryProblem& base,
                                    const std::vector<double>& eps_list);

struct ViAuditResult {
    double min_slack = 0.0;
    double max_test_distance = 0.0;  // max ||v - u||_{V,h} over samples
    int samples = 0;
};

// Evaluates the variational-inequality slack
//   nu*(grad u, grad(v-u))_h + (g,|grad v|)_h - (g,|grad u|)_h - (f, v-u)_h
// over leray-projected smoothed random fields at scales {0.1, 1, 10} of
// ||u||_{V,h}, plus the forced sample v = u.
ViAuditResult audit_variational_inequality(const StationaryProblem& problem,
                                           const VelocityField& u,
                                           int n_samples, std::uint64_t seed);

}  // namespace bingham2d
