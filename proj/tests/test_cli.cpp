#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
    int code = -1;
    std::string output;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, n);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) res.code = WEXITSTATUS(status);
    return res;
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "bingham2d_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const fs::path& dir, const std::string& text) {
    fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << text;
    return p.string();
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t line_count(const std::string& s) {
    size_t n = 0;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) ++n;
    return n;
}

std::string first_line(const std::string& s) {
    return s.substr(0, s.find('\n'));
}

const char* kBinary = BINGHAM2D_BINARY;

// manufactured benchmark on [0,pi]^2 with nu = 1
const char* kStationaryConfig = R"json({
  "mode": "stationary",
  "domain": {"lx": 3.141592653589793, "ly": 3.141592653589793, "nx": 16, "ny": 16},
  "physics": {"nu": 1.0, "epsilon": 1e-3},
  "data": {"f": ["sin(x)*cos(y)", "-3*cos(x)*sin(y)"], "g": "0"},
  "analytic_solution": {"u1": "sin(x)*cos(y)", "u2": "-cos(x)*sin(y)", "p": "cos(x)*cos(y)"},
  "vi_samples": 6,
  "seed": 11
})json";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("a stationary run exits zero and writes the advertised artifacts") {
    fs::path dir = scratch("stationary_ok");
    std::string cfg = write_config(dir, kStationaryConfig);
    fs::path out = dir / "out";
    CmdResult res = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + out.string());
    CHECK(res.code == 0);

    json rep = json::parse(read_file(out / "report.json"));
    CHECK(rep["converged"].get<bool>());
    CHECK(rep["errors"]["u_l2_rel"].get<double>() <= 0.05);
    CHECK(rep["errors"]["p_l2"].get<double>() <= 0.2);
    CHECK(rep["lambda_max"].get<double>() <= 1.0 + 1e-12);
    CHECK(rep["vi_pass"].get<bool>());
    CHECK(rep["vi_samples"].get<int>() == 7);

    const std::string vel = read_file(out / "velocity.csv");
    CHECK(first_line(vel) == "x,y,u1,u2");
    CHECK(line_count(vel) == 16 * 16 + 1);
    const std::string pre = read_file(out / "pressure.csv");
    CHECK(first_line(pre) == "x,y,value");
    CHECK(line_count(pre) == 16 * 16 + 1);
    CHECK(fs::exists(out / "yield.csv"));
}

TEST_CASE("bad configurations exit with code one and a diagnostic") {
    fs::path dir = scratch("bad_config");

    std::string tiny = write_config(dir, R"json({
      "mode": "stationary",
      "domain": {"nx": 2, "ny": 16},
      "data": {"f": ["1", "0"], "g": "0"}
    })json");
    CmdResult res = run_cmd(std::string(kBinary) + " run " + tiny);
    CHECK(res.code == 1);
    CHECK(res.output.find("error") != std::string::npos);

    fs::path dir2 = scratch("bad_eps");
    std::string ascending = write_config(dir2, R"json({
      "mode": "eps-study",
      "data": {"f": ["1", "0"], "g": "1"},
      "eps_list": [1e-3, 1e-2]
    })json");
    CmdResult res2 = run_cmd(std::string(kBinary) + " run " + ascending);
    CHECK(res2.code == 1);
    CHECK(res2.output.find("strictly decreasing") != std::string::npos);

    fs::path dir3 = scratch("missing_f");
    std::string nof = write_config(dir3, R"json({"mode": "stationary", "data": {"g": "1"}})json");
    CmdResult res3 = run_cmd(std::string(kBinary) + " run " + nof);
    CHECK(res3.code == 1);
    CHECK(res3.output.find("data.f") != std::string::npos);

    CmdResult res4 = run_cmd(std::string(kBinary) + " run /nonexistent/config.json");
    CHECK(res4.code != 0);
    CHECK(res4.code != 2);
}

TEST_CASE("equal configs and seeds reproduce artifacts byte for byte") {
    fs::path dir = scratch("determinism");
    std::string cfg = write_config(dir, R"json({
      "mode": "stationary",
      "domain": {"lx": 3.141592653589793, "ly": 3.141592653589793, "nx": 16, "ny": 16},
      "physics": {"nu": 1.0, "epsilon": 1e-2},
      "data": {"f": ["sin(x)*cos(y)", "-3*cos(x)*sin(y)"], "g": "0.5*sin(x)*sin(y)"},
      "vi_samples": 4,
      "seed": 7
    })json");
    fs::path a = dir / "a", b = dir / "b";
    CmdResult ra = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + a.string());
    CmdResult rb = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + b.string());
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(read_file(a / "velocity.csv") == read_file(b / "velocity.csv"));
    CHECK(read_file(a / "pressure.csv") == read_file(b / "pressure.csv"));
    CHECK(read_file(a / "yield.csv") == read_file(b / "yield.csv"));

    // a different seed changes only the audit, never the solution artifacts
    fs::path c = dir / "c";
    CmdResult rc = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + c.string() +
                           " --seed 12345");
    REQUIRE(rc.code == 0);
    CHECK(read_file(a / "velocity.csv") == read_file(c / "velocity.csv"));
}

TEST_CASE("a starved iteration budget exits two yet keeps its artifacts") {
    fs::path dir = scratch("nonconverged");
    std::string cfg = write_config(dir, R"json({
      "mode": "stationary",
      "domain": {"lx": 3.141592653589793, "ly": 3.141592653589793, "nx": 12, "ny": 12},
      "physics": {"nu": 1.0, "epsilon": 1e-3},
      "data": {"f": ["sin(x)*cos(y)", "-3*cos(x)*sin(y)"], "g": "2*sin(x)*sin(y)"},
      "solver": {"max_picard": 1},
      "vi_samples": 2
    })json");
    fs::path out = dir / "out";
    CmdResult res = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + out.string());
    CHECK(res.code == 2);
    json rep = json::parse(read_file(out / "report.json"));
    CHECK(!rep["converged"].get<bool>());
    CHECK(rep["failure_stage"].get<std::string>() == "picard");
    CHECK(fs::exists(out / "velocity.csv"));
    CHECK(fs::exists(out / "pressure.csv"));
}

TEST_CASE("the frame check mode validates charts in both derivative modes") {
    fs::path dir = scratch("frame_poly");
    std::string cfg = write_config(dir, R"json({
      "mode": "frame-check",
      "frame": {"d": 2, "rho_poly": [0, 0.3, 0.5], "extent": 0.8, "samples": 32}
    })json");
    fs::path out = dir / "out";
    CmdResult res = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + out.string());
    CHECK(res.code == 0);
    json rep = json::parse(read_file(out / "frame_report.json"));
    CHECK(rep["pass"].get<bool>());
    CHECK(rep["d"].get<int>() == 2);
    CHECK(rep["samples"].get<int>() == 32);
    CHECK(rep["analytic_derivatives"].get<bool>());
    CHECK(rep["tolerance"].get<double>() == 1e-11);
    CHECK(rep["max_residuals"]["inverse"].get<double>() <= 1e-11);
    CHECK(rep["max_residuals"]["tangency"].get<double>() <= 1e-11);

    fs::path dir2 = scratch("frame_expr");
    std::string cfg2 = write_config(dir2, R"json({
      "mode": "frame-check",
      "frame": {"d": 3, "rho": "0.2*x*x + 0.1*x*y", "extent": 0.5, "samples": 16}
    })json");
    fs::path out2 = dir2 / "out";
    CmdResult res2 = run_cmd(std::string(kBinary) + " run " + cfg2 + " --out " + out2.string());
    CHECK(res2.code == 0);
    json rep2 = json::parse(read_file(out2 / "frame_report.json"));
    CHECK(rep2["pass"].get<bool>());
    CHECK(rep2["d"].get<int>() == 3);
    CHECK(!rep2["analytic_derivatives"].get<bool>());
    CHECK(rep2["tolerance"].get<double>() == 1e-6);
}

TEST_CASE("mode override subcommands redirect one config everywhere") {
    fs::path dir = scratch("override");
    // one config carrying data for the flow modes and a chart for frame-check
    std::string cfg = write_config(dir, R"json({
      "mode": "stationary",
      "domain": {"lx": 3.141592653589793, "ly": 3.141592653589793, "nx": 12, "ny": 12},
      "physics": {"nu": 1.0, "epsilon": 1e-2},
      "data": {"f": ["sin(x)*cos(y)", "-3*cos(x)*sin(y)"], "g": "0",
               "u0": ["sin(x)*cos(y)", "-cos(x)*sin(y)"]},
      "time": {"T": 0.2, "N": 4},
      "frame": {"d": 2, "rho_poly": [0, 0.1, 0.2], "samples": 8}
    })json");

    fs::path fout = dir / "frame_out";
    CmdResult fres = run_cmd(std::string(kBinary) + " frame-check " + cfg + " --out " +
                             fout.string());
    CHECK(fres.code == 0);
    CHECK(fs::exists(fout / "frame_report.json"));
    CHECK(!fs::exists(fout / "velocity.csv"));

    fs::path eout = dir / "evolve_out";
    CmdResult eres = run_cmd(std::string(kBinary) + " evolve " + cfg + " --out " +
                             eout.string());
    CHECK(eres.code == 0);
    CHECK(fs::exists(eout / "ledger.csv"));
    CHECK(fs::exists(eout / "tstar.json"));
    CHECK(fs::exists(eout / "trajectory" / "velocity_00000.csv"));
    CHECK(fs::exists(eout / "trajectory" / "velocity_00004.csv"));
    CHECK(fs::exists(eout / "trajectory" / "pressure_00004.csv"));

    json tstar = json::parse(read_file(eout / "tstar.json"));
    CHECK(tstar["t_star"].get<double>() == 0.2);
    CHECK(tstar["dim2_global"].get<bool>());

    json rep = json::parse(read_file(eout / "report.json"));
    CHECK(rep["completed"].get<bool>());
    CHECK(rep["steps"].get<int>() == 4);
    const double lhs = rep["interpolant_gap"]["lhs"].get<double>();
    const double rhs = rep["interpolant_gap"]["rhs"].get<double>();
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * (rhs + 1e-30));

    const std::string ledger = read_file(eout / "ledger.csv");
    CHECK(line_count(ledger) == 4 + 1);
    CHECK(first_line(ledger).rfind("k,t,", 0) == 0);
}

TEST_CASE("the epsilon study writes its rate table and verdict") {
    fs::path dir = scratch("eps_study");
    std::string cfg = write_config(dir, R"json({
      "mode": "eps-study",
      "domain": {"lx": 3.141592653589793, "ly": 3.141592653589793, "nx": 16, "ny": 16},
      "physics": {"nu": 1.0, "epsilon": 1e-3},
      "data": {"f": ["sin(x)*cos(y)", "-3*cos(x)*sin(y)"], "g": "0.5*sin(x)*sin(y)",
               "g_vanishes_on_boundary": true},
      "eps_list": [1e-1, 3e-2, 1e-2]
    })json");
    fs::path out = dir / "out";
    CmdResult res = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + out.string());
    CHECK(res.code == 0);

    const std::string table = read_file(out / "eps_study.csv");
    CHECK(first_line(table) == "eps_i,eps_j,dist_sq,bound,pass");
    CHECK(line_count(table) == 3 + 1);  // pairs (0,1), (0,2), (1,2)

    json rep = json::parse(read_file(out / "report.json"));
    CHECK(rep["rate_law_pass"].get<bool>());
    CHECK(rep["entries"].size() == 3);
    CHECK(rep["h2_last_over_first"].get<double>() <= 2.0);
    for (const auto& e : rep["entries"]) CHECK(e["lambda_max"].get<double>() <= 1.0 + 1e-12);
}

TEST_CASE("the grid study reports second order convergence") {
    fs::path dir = scratch("grid_study");
    std::string cfg = write_config(dir, R"json({
      "mode": "grid-study",
      "domain": {"lx": 3.141592653589793, "ly": 3.141592653589793, "nx": 8, "ny": 8},
      "physics": {"nu": 1.0, "epsilon": 1e-3},
      "data": {"f": ["sin(x)*cos(y)", "-3*cos(x)*sin(y)"], "g": "0"},
      "analytic_solution": {"u1": "sin(x)*cos(y)", "u2": "-cos(x)*sin(y)", "p": "cos(x)*cos(y)"},
      "levels": 3
    })json");
    fs::path out = dir / "out";
    CmdResult res = run_cmd(std::string(kBinary) + " run " + cfg + " --out " + out.string());
    CHECK(res.code == 0);

    const std::string table = read_file(out / "grid_study.csv");
    CHECK(first_line(table) == "level,nx,ny,err_u_l2,err_u_h1,err_p_l2,order_u_l2,order_u_h1");
    CHECK(line_count(table) == 3 + 1);

    json rep = json::parse(read_file(out / "report.json"));
    REQUIRE(rep["levels"].size() == 3);
    CHECK(rep["levels"][0]["order_u_l2"].get<double>() >= 1.8);
    CHECK(rep["levels"][1]["order_u_l2"].get<double>() >= 1.8);
    CHECK(rep["levels"][1]["order_u_h1"].get<double>() >= 1.8);
    CHECK(rep["levels"][2]["nx"].get<int>() == 32);
}

}  // TEST_SUITE
