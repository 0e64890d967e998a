#pragma once

#include <functional>
#include <vector>

#include "bingham2d/stationary.hpp"

namespace bingham2d {

using VelocitySampler = std::function<VelocityField(double)>;
using ScalarSampler = std::function<ScalarCellField(double)>;

// Interval average over ((k-1)h, kh) by 4-point Gauss-Legendre quadrature
// (exact through polynomial degree 7 in t); k = 0 returns the t = 0 sample.
VelocityField time_average(const Grid& g, const VelocitySampler& f, int k, double h);
ScalarCellField time_average(const Grid& g, const ScalarSampler& f, int k, double h);

struct EvolutionProblem {
    Grid grid;
    PhysicsParams params;
    VelocitySampler forcing;   // f(t)
    ScalarSampler yield;       // g(t), must stay nonnegative
    VelocityField u0;
    double T = 1.0;
    int N = 1;
    double M = 1e8;            // convection truncation radius
    SolverControls controls;
    int store_stride = 1;      // trajectory snapshot stride
    bool strong_initial_check = false;

    void validate() const;
};

struct LedgerRow {
    int k = 0;
    double t = 0.0;
    double u_l2_sq = 0.0;        // |u_k|^2
    double du_l2_sq = 0.0;       // |u_k - u_{k-1}|^2
    double visc_v_sq_dt = 0.0;   // nu |u_k|_{V,h}^2 h
    double yield_dt = 0.0;       // (g_k, |grad u_k|) h
    double dudt_l2_sq = 0.0;     // |(u_k - u_{k-1})/h|^2
    double grad_du_sq = 0.0;     // |grad(u_k - u_{k-1})|^2
    double subgrad_l2_sq = 0.0;  // |dJ(u_k) + grad p_k|^2
    double h2_full_sq = 0.0;     // |u_k|^2 + |grad u_k|^2 + h2_semi^2
    double h1_semi_sq = 0.0;
    double yield_term = 0.0;     // (g_k, |grad u_k|)
    double f_l2_sq = 0.0;
    double g_h1_sq = 0.0;        // |g_k|^2 + |grad_h g_k|^2
    double dg_l2 = 0.0;          // |(g_k - g_{k-1})/h|
    SolveReport step;
};

struct EnergyLedger {
    double T = 0.0;
    int N = 0;
    std::vector<LedgerRow> rows;
};

struct Trajectory {
    Grid grid;
    double T = 0.0;
    int N = 0;
    int stride = 1;
    std::vector<int> snap_k;
    std::vector<VelocityField> u;
    std::vector<ScalarCellField> p;  // p at the same snapshots (k >= 1)

    const VelocityField& final_u() const { return u.back(); }
    // Piecewise-linear interpolant through the grid values (needs stride 1).
    VelocityField eval_linear(double t) const;
    // Right-constant interpolant; t = 0 maps to u0.
    const VelocityField& eval_const(double t) const;
};

struct StepResult {
    VelocityField u;
    ScalarCellField p;
    SolveReport report;
};

// One increment of the implicit scheme:
// (u - u_prev)/h + dJ_{g_k}(u) + theta(u) B_skew(u,u) + grad p = f_k, div u = 0.
StepResult rothe_step(const Grid& g, const PhysicsParams& params,
                      const VelocityField& u_prev, const VelocityField& f_k,
                      const YieldField& g_k, double h, double M,
                      const SolverControls& controls,
                      const ScalarCellField* p_warm = nullptr);

struct EvolveResult {
    Trajectory trajectory;
    EnergyLedger ledger;
    bool completed = false;
    int aborted_at_step = -1;  // first of the fatal consecutive failures
};

// Marches k = 1..N with interval-averaged data, warm starts, and the energy
// ledger; aborts after three consecutive non-converged steps.
EvolveResult evolve(const EvolutionProblem& problem);

struct LedgerAudit {
    double lhs_energy = 0.0;   // max_m [|u_m|^2 + sum |du|^2 + sum nu|u|_V^2 h + sum (g,|grad u|) h]
    double rhs_energy = 0.0;   // |u0|^2 + sum |f_k|^2 h
    double lhs_strong = 0.0;   // max_m [nu|grad u_m|^2 + (g_m,|grad u_m|)] + sums of
                               // (|dJ+grad p|^2 + |u|_{H2}^2 + |du/h|^2) h
    double rhs_strong = 0.0;
    double lhs_increment = 0.0;  // sum |grad(u_k - u_{k-1})|^2
    double rhs_increment = 0.0;
    double ratio_energy = 0.0;
    double ratio_strong = 0.0;
    double ratio_increment = 0.0;
};

LedgerAudit audit_ledger(const Grid& g, const PhysicsParams& params,
                         const VelocityField& u0, const ScalarCellField& g0,
                         const EnergyLedger& ledger);

// Integral identity linking the two interpolants:
// int_0^T |grad(u_lin - u_const)|^2 dt = (h^2/3) sum_k |grad((u_k-u_{k-1})/h)|^2 h.
// Returns {lhs, rhs}; lhs via per-interval Gauss quadrature.
std::pair<double, double> interpolant_gap_identity(const Trajectory& traj);

struct TstarEstimate {
    double t_star = 0.0;
    double y0 = 0.0;
};

// Largest grid time t_m with y(0) * sum_{k<=m} a_k h <= 1/2 for
// a_k = C_user (|f_k|^2 + |g_k|_{H1}^2 + |dg_k| + |grad u_k|^2) and
// y(0) = nu/2 |grad u0|^2 + (g(0), |grad u0|) + 1.  In two dimensions the
// horizon is global, so dim2_global returns T directly.
TstarEstimate estimate_tstar(const Grid& g, const PhysicsParams& params,
                             const VelocityField& u0, const ScalarCellField& g0,
                             const EnergyLedger& ledger, double c_user,
                             bool dim2_global);

}  // namespace bingham2d
