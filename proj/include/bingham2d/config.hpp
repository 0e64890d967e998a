#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bingham2d/expr.hpp"
#include "bingham2d/frame.hpp"
#include "bingham2d/stationary.hpp"

namespace bingham2d {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class RunMode {
    Stationary,
    Evolve,
    EpsStudy,
    GridStudy,
    FrameCheck,
};

struct AnalyticSolution {
    Expr u1;
    Expr u2;
    std::optional<Expr> p;
};

struct FrameConfig {
    int dim = 2;                                       // ambient dimension, 2 or 3
    std::vector<HeightFunction::PolyTerm> rho_poly;    // polynomial height function
    std::optional<Expr> rho_expr;                      // alternative: expression in x (and y when dim == 3)
    double extent = 1.0;                               // probe box half-width
    int samples = 64;                                  // probe count
};

struct RunConfig {
    RunMode mode = RunMode::Stationary;

    double lx = 1.0, ly = 1.0;
    int nx = 32, ny = 32;

    double nu = 1.0;
    double epsilon = 1e-3;
    double convection_cap = 1e8;  // M in the truncated convection term

    Expr forcing_u1;
    Expr forcing_u2;
    Expr yield_expr;
    std::optional<Expr> initial_u1;
    std::optional<Expr> initial_u2;

    double horizon = 1.0;  // T
    int steps = 16;        // N
    double c_user = 1.0;
    bool dim2_global = true;
    bool yield_vanishes_on_boundary = false;

    SolverControls controls;

    std::vector<double> eps_list;
    int levels = 3;  // grid study refinements

    std::optional<AnalyticSolution> analytic;

    FrameConfig frame;

    std::string out_dir = "out";
    int store_stride = 1;
    unsigned seed = 2026;
    int vi_samples = 12;

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
};

}  // namespace bingham2d
