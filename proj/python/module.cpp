#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bingham2d/convection.hpp"
#include "bingham2d/energy.hpp"
#include "bingham2d/evolution.hpp"
#include "bingham2d/expr.hpp"
#include "bingham2d/frame.hpp"
#include "bingham2d/operators.hpp"
#include "bingham2d/stationary.hpp"

namespace py = pybind11;
using namespace bingham2d;

namespace {

// numpy <-> field conversions; arrays are (ny, nx)-shaped, C order, so
// row index is y and column index is x, matching the CSV dump order.

py::array_t<double> cell_to_array(const ScalarCellField& f) {
    py::array_t<double> a({f.ny, f.nx});
    auto r = a.mutable_unchecked<2>();
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) r(j, i) = f.at(i, j);
    return a;
}

ScalarCellField array_to_cell(const Grid& g, const py::array_t<double>& a) {
    auto r = a.unchecked<2>();
    if (r.shape(0) != g.ny || r.shape(1) != g.nx)
        throw std::invalid_argument("cell array must have shape (ny, nx)");
    ScalarCellField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = r(j, i);
    return f;
}

py::tuple velocity_to_arrays(const VelocityField& u) {
    py::array_t<double> a1({u.ny, u.nx + 1});
    py::array_t<double> a2({u.ny + 1, u.nx});
    auto r1 = a1.mutable_unchecked<2>();
    auto r2 = a2.mutable_unchecked<2>();
    for (int j = 0; j < u.ny; ++j)
        for (int i = 0; i <= u.nx; ++i) r1(j, i) = u.u1_at(i, j);
    for (int j = 0; j <= u.ny; ++j)
        for (int i = 0; i < u.nx; ++i) r2(j, i) = u.u2_at(i, j);
    return py::make_tuple(a1, a2);
}

VelocityField arrays_to_velocity(const Grid& g, const py::array_t<double>& a1,
                                 const py::array_t<double>& a2) {
    auto r1 = a1.unchecked<2>();
    auto r2 = a2.unchecked<2>();
    if (r1.shape(0) != g.ny || r1.shape(1) != g.nx + 1)
        throw std::invalid_argument("u1 array must have shape (ny, nx+1)");
    if (r2.shape(0) != g.ny + 1 || r2.shape(1) != g.nx)
        throw std::invalid_argument("u2 array must have shape (ny+1, nx)");
    VelocityField u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) u.u1_at(i, j) = r1(j, i);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.u2_at(i, j) = r2(j, i);
    u.enforce_slip();
    return u;
}

VelocityField sample_expr_velocity(const Grid& g, const std::string& e1, const std::string& e2,
                                   double t) {
    const Expr x1 = Expr::parse(e1);
    const Expr x2 = Expr::parse(e2);
    return sample_velocity(
        g, [&](double x, double y) { return x1.eval(x, y, t); },
        [&](double x, double y) { return x2.eval(x, y, t); });
}

ScalarCellField sample_expr_cells(const Grid& g, const std::string& e, double t) {
    const Expr x = Expr::parse(e);
    return sample_cells(g, [&](double x_, double y_) { return x.eval(x_, y_, t); });
}

py::dict report_to_dict(const SolveReport& r) {
    py::dict d;
    d["picard_iters"] = r.picard_iters;
    d["uzawa_iters_total"] = r.uzawa_iters_total;
    d["cg_iters_total"] = r.cg_iters_total;
    d["residual_momentum"] = r.residual_momentum;
    d["residual_div"] = r.residual_div;
    d["energy"] = r.energy;
    d["wall_time_s"] = r.wall_time_s;
    d["converged"] = r.converged;
    d["failure_stage"] = r.failure_stage;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "staggered-grid Bingham flow solver";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<EvalError>(m, "EvalError");

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, double, int, int>(), py::arg("lx"), py::arg("ly"), py::arg("nx"),
             py::arg("ny"))
        .def_readonly("lx", &Grid::lx)
        .def_readonly("ly", &Grid::ly)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("ny", &Grid::ny)
        .def_readonly("hx", &Grid::hx)
        .def_readonly("hy", &Grid::hy);

    m.def("eval_expr", [](const std::string& src, double x, double y, double t) {
        return Expr::parse(src).eval(x, y, t);
    }, py::arg("src"), py::arg("x"), py::arg("y"), py::arg("t") = 0.0);
    m.def("pretty_expr", [](const std::string& src) { return Expr::parse(src).pretty(); });

    m.def(
        "sample_velocity_arrays",
        [](const Grid& g, const std::string& e1, const std::string& e2, double t) {
            return velocity_to_arrays(sample_expr_velocity(g, e1, e2, t));
        },
        py::arg("grid"), py::arg("u1"), py::arg("u2"), py::arg("t") = 0.0);
    m.def(
        "sample_cells",
        [](const Grid& g, const std::string& e, double t) {
            return cell_to_array(sample_expr_cells(g, e, t));
        },
        py::arg("grid"), py::arg("expr"), py::arg("t") = 0.0);

    m.def(
        "divergence",
        [](const Grid& g, const py::array_t<double>& u1, const py::array_t<double>& u2) {
            return cell_to_array(divergence(g, arrays_to_velocity(g, u1, u2)));
        },
        py::arg("grid"), py::arg("u1"), py::arg("u2"));
    m.def(
        "leray_project",
        [](const Grid& g, const py::array_t<double>& u1, const py::array_t<double>& u2) {
            return velocity_to_arrays(leray_project(g, arrays_to_velocity(g, u1, u2)));
        },
        py::arg("grid"), py::arg("u1"), py::arg("u2"));
    m.def(
        "h1_seminorm",
        [](const Grid& g, const py::array_t<double>& u1, const py::array_t<double>& u2) {
            return h1_seminorm(g, arrays_to_velocity(g, u1, u2));
        },
        py::arg("grid"), py::arg("u1"), py::arg("u2"));
    m.def(
        "l2_norm",
        [](const Grid& g, const py::array_t<double>& u1, const py::array_t<double>& u2) {
            return l2_norm(g, arrays_to_velocity(g, u1, u2));
        },
        py::arg("grid"), py::arg("u1"), py::arg("u2"));

    m.def(
        "regularized_energy",
        [](const Grid& g, double nu, double eps, const py::array_t<double>& yield_values,
           const py::array_t<double>& u1, const py::array_t<double>& u2) {
            return regularized_energy(g, PhysicsParams(nu, eps),
                                      YieldField(array_to_cell(g, yield_values)),
                                      arrays_to_velocity(g, u1, u2));
        },
        py::arg("grid"), py::arg("nu"), py::arg("epsilon"), py::arg("yield_values"),
        py::arg("u1"), py::arg("u2"));
    m.def(
        "energy_gradient",
        [](const Grid& g, double nu, double eps, const py::array_t<double>& yield_values,
           const py::array_t<double>& u1, const py::array_t<double>& u2) {
            return velocity_to_arrays(energy_gradient(g, PhysicsParams(nu, eps),
                                                      YieldField(array_to_cell(g, yield_values)),
                                                      arrays_to_velocity(g, u1, u2)));
        },
        py::arg("grid"), py::arg("nu"), py::arg("epsilon"), py::arg("yield_values"),
        py::arg("u1"), py::arg("u2"));
    m.def(
        "dual_multiplier_max",
        [](const Grid& g, double nu, double eps, const py::array_t<double>& u1,
           const py::array_t<double>& u2) {
            const TensorCellField lam =
                dual_multiplier(g, PhysicsParams(nu, eps), arrays_to_velocity(g, u1, u2));
            double worst = 0.0;
            for (std::size_t c = 0; c < lam.cells(); ++c)
                worst = std::max(worst, std::sqrt(lam.t11[c] * lam.t11[c] + lam.t12[c] * lam.t12[c] +
                                                  lam.t21[c] * lam.t21[c] + lam.t22[c] * lam.t22[c]));
            return worst;
        },
        py::arg("grid"), py::arg("nu"), py::arg("epsilon"), py::arg("u1"), py::arg("u2"));

    m.def(
        "solve_stationary",
        [](const Grid& g, double nu, double eps, const py::array_t<double>& yield_values,
           const py::array_t<double>& f1, const py::array_t<double>& f2, double tol_picard) {
            StationaryProblem prob{g, PhysicsParams(nu, eps),
                                   YieldField(array_to_cell(g, yield_values)),
                                   arrays_to_velocity(g, f1, f2), SolverControls{}, false};
            prob.controls.tol_picard = tol_picard;
            StationarySolution sol = solve_stationary(prob);
            py::tuple uv = velocity_to_arrays(sol.u);
            return py::make_tuple(uv[0], uv[1], cell_to_array(sol.p), report_to_dict(sol.report));
        },
        py::arg("grid"), py::arg("nu"), py::arg("epsilon"), py::arg("yield_values"),
        py::arg("f1"), py::arg("f2"), py::arg("tol_picard") = 1e-9,
        "returns (u1, u2, p, report)");

    m.def(
        "check_frame_identities",
        [](int surface_dim, const std::vector<std::tuple<int, int, double>>& terms,
           const std::vector<double>& point) {
            std::vector<HeightFunction::PolyTerm> ts;
            for (const auto& [px, py_, c] : terms) ts.push_back({px, py_, c});
            const HeightFunction rho = HeightFunction::polynomial(surface_dim, ts);
            Eigen::VectorXd yp(surface_dim);
            for (int d = 0; d < surface_dim; ++d) yp[d] = point.at(d);
            const FrameIdentityReport r = check_frame_identities(rho, yp);
            py::dict d;
            d["inverse"] = r.inverse_residual;
            d["symmetry"] = r.symmetry_residual;
            d["psi_normal"] = r.psi_normal_residual;
            d["phi_normal"] = r.phi_normal_residual;
            d["tangency"] = r.tangency_residual;
            d["roundtrip"] = r.roundtrip_residual;
            d["max"] = r.max_residual();
            return d;
        },
        py::arg("surface_dim"), py::arg("poly_terms"), py::arg("point"),
        "poly_terms: list of (px, py, c); point: surface coordinates");
}
