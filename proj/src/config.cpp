#include "bingham2d/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bingham2d {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where + " must be a number");
    return j.get<double>();
}

int need_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where + " must be an integer");
    return j.get<int>();
}

std::string need_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where + " must be a string");
    return j.get<std::string>();
}

Expr need_expr(const json& j, const std::string& where) {
    const std::string src = need_string(j, where);
    try {
        return Expr::parse(src);
    } catch (const ParseError& e) {
        fail(where + ": " + e.what());
    }
}

void read_expr_pair(const json& j, const std::string& where, Expr& first, Expr& second) {
    if (!j.is_array() || j.size() != 2) fail(where + " must be an array of two expression strings");
    first = need_expr(j[0], where + "[0]");
    second = need_expr(j[1], where + "[1]");
}

RunMode parse_mode(const std::string& s) {
    if (s == "stationary") return RunMode::Stationary;
    if (s == "evolve") return RunMode::Evolve;
    if (s == "eps-study") return RunMode::EpsStudy;
    if (s == "grid-study") return RunMode::GridStudy;
    if (s == "frame-check") return RunMode::FrameCheck;
    fail("mode must be one of stationary, evolve, eps-study, grid-study, frame-check (got \"" + s +
         "\")");
}

void read_domain(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("domain must be an object");
    if (const json* v = find(j, "lx")) cfg.lx = need_number(*v, "domain.lx");
    if (const json* v = find(j, "ly")) cfg.ly = need_number(*v, "domain.ly");
    if (const json* v = find(j, "nx")) cfg.nx = need_int(*v, "domain.nx");
    if (const json* v = find(j, "ny")) cfg.ny = need_int(*v, "domain.ny");
}

void read_physics(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("physics must be an object");
    if (const json* v = find(j, "nu")) cfg.nu = need_number(*v, "physics.nu");
    if (const json* v = find(j, "epsilon")) cfg.epsilon = need_number(*v, "physics.epsilon");
    if (const json* v = find(j, "M")) cfg.convection_cap = need_number(*v, "physics.M");
}

void read_data(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("data must be an object");
    if (const json* v = find(j, "f")) {
        read_expr_pair(*v, "data.f", cfg.forcing_u1, cfg.forcing_u2);
    }
    if (const json* v = find(j, "g")) cfg.yield_expr = need_expr(*v, "data.g");
    if (const json* v = find(j, "u0")) {
        Expr a, b;
        read_expr_pair(*v, "data.u0", a, b);
        cfg.initial_u1 = a;
        cfg.initial_u2 = b;
    }
    if (const json* v = find(j, "g_vanishes_on_boundary")) {
        if (!v->is_boolean()) fail("data.g_vanishes_on_boundary must be a boolean");
        cfg.yield_vanishes_on_boundary = v->get<bool>();
    }
}

void read_time(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("time must be an object");
    if (const json* v = find(j, "T")) cfg.horizon = need_number(*v, "time.T");
    if (const json* v = find(j, "N")) cfg.steps = need_int(*v, "time.N");
    if (const json* v = find(j, "c_user")) cfg.c_user = need_number(*v, "time.c_user");
    if (const json* v = find(j, "dim2_global")) {
        if (!v->is_boolean()) fail("time.dim2_global must be a boolean");
        cfg.dim2_global = v->get<bool>();
    }
}

void read_solver(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("solver must be an object");
    if (const json* v = find(j, "tol_picard")) cfg.controls.tol_picard = need_number(*v, "solver.tol_picard");
    if (const json* v = find(j, "tol_uzawa")) cfg.controls.tol_uzawa = need_number(*v, "solver.tol_uzawa");
    if (const json* v = find(j, "tol_cg")) cfg.controls.tol_cg = need_number(*v, "solver.tol_cg");
    if (const json* v = find(j, "max_picard")) cfg.controls.max_picard = need_int(*v, "solver.max_picard");
    if (const json* v = find(j, "max_uzawa")) cfg.controls.max_uzawa = need_int(*v, "solver.max_uzawa");
    if (const json* v = find(j, "max_cg")) cfg.controls.max_cg = need_int(*v, "solver.max_cg");
}

void read_frame(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("frame must be an object");
    if (const json* v = find(j, "d")) cfg.frame.dim = need_int(*v, "frame.d");
    if (cfg.frame.dim != 2 && cfg.frame.dim != 3) fail("frame.d must be 2 or 3");
    const json* poly = find(j, "rho_poly");
    const json* expr = find(j, "rho");
    if (poly && expr) fail("frame: give rho_poly or rho, not both");
    if (poly) {
        if (!poly->is_array() || poly->empty()) fail("frame.rho_poly must be a non-empty array");
        cfg.frame.rho_poly.clear();
        if ((*poly)[0].is_number()) {
            // flat coefficient list c_k y^k, one surface variable only
            if (cfg.frame.dim != 2) fail("frame.rho_poly as a flat list needs frame.d = 2");
            for (std::size_t k = 0; k < poly->size(); ++k) {
                const double c = need_number((*poly)[k], "frame.rho_poly[" + std::to_string(k) + "]");
                if (c != 0.0)
                    cfg.frame.rho_poly.push_back({static_cast<int>(k), 0, c});
            }
        } else {
            for (std::size_t k = 0; k < poly->size(); ++k) {
                const json& term = (*poly)[k];
                const std::string where = "frame.rho_poly[" + std::to_string(k) + "]";
                if (!term.is_array() || term.size() != 3) fail(where + " must be [px, py, c]");
                cfg.frame.rho_poly.push_back({need_int(term[0], where + "[0]"),
                                              need_int(term[1], where + "[1]"),
                                              need_number(term[2], where + "[2]")});
            }
        }
    } else if (expr) {
        cfg.frame.rho_expr = need_expr(*expr, "frame.rho");
    }
    if (const json* v = find(j, "extent")) cfg.frame.extent = need_number(*v, "frame.extent");
    if (cfg.frame.extent <= 0.0) fail("frame.extent must be positive");
    if (const json* v = find(j, "samples")) cfg.frame.samples = need_int(*v, "frame.samples");
    if (cfg.frame.samples < 1) fail("frame.samples must be at least 1");
}

void read_output(const json& j, RunConfig& cfg) {
    if (!j.is_object()) fail("output must be an object");
    if (const json* v = find(j, "dir")) cfg.out_dir = need_string(*v, "output.dir");
    if (const json* v = find(j, "stride")) {
        cfg.store_stride = need_int(*v, "output.stride");
        if (cfg.store_stride < 1) fail("output.stride must be at least 1");
    }
}

RunConfig from_json(const json& doc) {
    if (!doc.is_object()) fail("config root must be a JSON object");
    RunConfig cfg;
    if (const json* v = find(doc, "mode")) cfg.mode = parse_mode(need_string(*v, "mode"));
    if (const json* v = find(doc, "domain")) read_domain(*v, cfg);
    if (const json* v = find(doc, "physics")) read_physics(*v, cfg);
    if (const json* v = find(doc, "data")) read_data(*v, cfg);
    if (const json* v = find(doc, "time")) read_time(*v, cfg);
    if (const json* v = find(doc, "solver")) read_solver(*v, cfg);
    if (const json* v = find(doc, "frame")) read_frame(*v, cfg);
    if (const json* v = find(doc, "output")) read_output(*v, cfg);
    if (const json* v = find(doc, "seed")) {
        const long long s = v->is_number_integer() ? v->get<long long>() : -1;
        if (s < 0) fail("seed must be a non-negative integer");
        cfg.seed = static_cast<unsigned>(s);
    }
    if (const json* v = find(doc, "vi_samples")) {
        cfg.vi_samples = need_int(*v, "vi_samples");
        if (cfg.vi_samples < 1) fail("vi_samples must be at least 1");
    }
    if (const json* v = find(doc, "eps_list")) {
        if (!v->is_array()) fail("eps_list must be an array of numbers");
        cfg.eps_list.clear();
        for (std::size_t k = 0; k < v->size(); ++k)
            cfg.eps_list.push_back(need_number((*v)[k], "eps_list[" + std::to_string(k) + "]"));
    }
    if (const json* v = find(doc, "levels")) {
        cfg.levels = need_int(*v, "levels");
        if (cfg.levels < 1) fail("levels must be at least 1");
    }
    if (const json* v = find(doc, "analytic_solution")) {
        if (!v->is_object()) fail("analytic_solution must be an object");
        AnalyticSolution sol;
        const json* u1 = find(*v, "u1");
        const json* u2 = find(*v, "u2");
        if (!u1 || !u2) fail("analytic_solution needs u1 and u2 expressions");
        sol.u1 = need_expr(*u1, "analytic_solution.u1");
        sol.u2 = need_expr(*u2, "analytic_solution.u2");
        if (const json* p = find(*v, "p")) sol.p = need_expr(*p, "analytic_solution.p");
        cfg.analytic = std::move(sol);
    }

    // Mode-specific requirements that do not belong to any numeric module.
    if (cfg.mode == RunMode::EpsStudy) {
        if (cfg.eps_list.size() < 2) fail("eps-study needs eps_list with at least two entries");
        for (std::size_t k = 0; k + 1 < cfg.eps_list.size(); ++k)
            if (!(cfg.eps_list[k] > cfg.eps_list[k + 1]))
                fail("eps_list must be strictly decreasing");
    }
    if (cfg.mode != RunMode::FrameCheck) {
        if (cfg.forcing_u1.empty() || cfg.forcing_u2.empty()) fail("data.f is required");
        if (cfg.yield_expr.empty()) fail("data.g is required");
    }
    if (cfg.mode == RunMode::FrameCheck && cfg.frame.rho_poly.empty() && !cfg.frame.rho_expr)
        fail("frame-check needs frame.rho_poly or frame.rho");
    return cfg;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(doc);
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

}  // namespace bingham2d
