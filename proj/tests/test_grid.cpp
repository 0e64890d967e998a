#include <cmath>
#include <random>

#include "bingham2d/operators.hpp"
#include "doctest.h"

using namespace bingham2d;

namespace {

constexpr double kPi = 3.14159265358979323846;

VelocityField random_velocity(const Grid& g, std::mt19937& rng, bool slip) {
    std::normal_distribution<double> n(0.0, 1.0);
    VelocityField u(g);
    for (auto& x : u.u1) x = n(rng);
    for (auto& x : u.u2) x = n(rng);
    if (slip) u.enforce_slip();
    return u;
}

ScalarCellField random_cells(const Grid& g, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ScalarCellField p(g);
    for (auto& x : p.v) x = n(rng);
    return p;
}

TensorCellField random_tensor(const Grid& g, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    TensorCellField t(g);
    for (size_t k = 0; k < t.cells(); ++k) {
        t.t11[k] = n(rng);
        t.t12[k] = n(rng);
        t.t21[k] = n(rng);
        t.t22[k] = n(rng);
    }
    return t;
}

VelocityField taylor_green(const Grid& g) {
    return sample_velocity(
        g, [](double x, double y) { return std::sin(x) * std::cos(y); },
        [](double x, double y) { return -std::cos(x) * std::sin(y); });
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid constructor validates its invariants") {
    CHECK_NOTHROW(Grid(1.0, 2.0, 4, 8));
    CHECK_THROWS_AS(Grid(1.0, 1.0, 2, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1.0, 1.0, 8, 3), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 8, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1.0, -1.0, 8, 8), std::invalid_argument);

    Grid g(2.0, 1.0, 8, 4);
    CHECK(g.hx == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.hy == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.xc(0) == doctest::Approx(0.125));
    CHECK(g.xface(8) == doctest::Approx(2.0));
    CHECK(g.cell_count() == 32);
}

TEST_CASE("slip enforcement zeroes exactly the wall-normal faces") {
    Grid g(1.0, 1.0, 6, 5);
    VelocityField u(g);
    fill(u, 1.0);
    CHECK(u.max_normal_trace() == 1.0);
    u.enforce_slip();
    CHECK(u.max_normal_trace() == 0.0);
    for (int j = 0; j < g.ny; ++j) {
        CHECK(u.u1_at(0, j) == 0.0);
        CHECK(u.u1_at(g.nx, j) == 0.0);
        for (int i = 1; i < g.nx; ++i) CHECK(u.u1_at(i, j) == 1.0);
    }
    for (int i = 0; i < g.nx; ++i) {
        CHECK(u.u2_at(i, 0) == 0.0);
        CHECK(u.u2_at(i, g.ny) == 0.0);
    }
}

TEST_CASE("shape guards reject fields from another grid") {
    Grid g(1.0, 1.0, 8, 8);
    Grid other(1.0, 1.0, 8, 16);
    VelocityField u(other);
    CHECK_THROWS_AS(velocity_gradient(g, u), std::invalid_argument);
    ScalarCellField p(other);
    CHECK_THROWS_AS(pressure_gradient(g, p), std::invalid_argument);
}

TEST_CASE("gradient and divergence are exact on affine fields") {
    Grid g(2.0, 1.5, 12, 9);
    // u1 = 2 + 3x + 4y, u2 = -1 + 5x - 2y, filled directly on the faces
    VelocityField u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            u.u1_at(i, j) = 2.0 + 3.0 * g.xface(i) + 4.0 * g.yc(j);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.u2_at(i, j) = -1.0 + 5.0 * g.xc(i) - 2.0 * g.yface(j);

    TensorCellField t = velocity_gradient(g, u);
    ScalarCellField d = divergence(g, u);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const size_t c = t.idx(i, j);
            CHECK(t.t11[c] == doctest::Approx(3.0).epsilon(1e-13));
            CHECK(t.t22[c] == doctest::Approx(-2.0).epsilon(1e-13));
            CHECK(d.at(i, j) == doctest::Approx(1.0).epsilon(1e-12));
            // tangential derivatives: centered and exact away from the walls,
            // halved on wall rows by the mirror-ghost convention
            const double want12 = (j == 0 || j == g.ny - 1) ? 2.0 : 4.0;
            const double want21 = (i == 0 || i == g.nx - 1) ? 2.5 : 5.0;
            CHECK(t.t12[c] == doctest::Approx(want12).epsilon(1e-13));
            CHECK(t.t21[c] == doctest::Approx(want21).epsilon(1e-13));
        }
}

TEST_CASE("pressure gradient is exact inside and zero on the walls") {
    Grid g(2.0, 2.0, 10, 10);
    ScalarCellField p = sample_cells(g, [](double x, double y) { return 3.0 * x - 7.0 * y; });
    VelocityField gp = pressure_gradient(g, p);
    CHECK(gp.max_normal_trace() == 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            CHECK(gp.u1_at(i, j) == doctest::Approx(3.0).epsilon(1e-13));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(gp.u2_at(i, j) == doctest::Approx(-7.0).epsilon(1e-13));
}

TEST_CASE("summation by parts: (div u, p) = -(u, grad p) to rounding") {
    std::mt19937 rng(101);
    for (auto [nx, ny] : {std::pair{8, 8}, std::pair{16, 11}, std::pair{7, 23}}) {
        Grid g(1.7, 0.9, nx, ny);
        for (int rep = 0; rep < 20; ++rep) {
            VelocityField u = random_velocity(g, rng, true);
            ScalarCellField p = random_cells(g, rng);
            const double a = dot(g, divergence(g, u), p);
            const double b = -dot(g, u, pressure_gradient(g, p));
            CHECK(std::fabs(a - b) <= 1e-13 * (std::fabs(a) + std::fabs(b) + 1.0));
        }
    }
}

TEST_CASE("gradient_adjoint is the exact adjoint of velocity_gradient") {
    std::mt19937 rng(202);
    for (auto [nx, ny] : {std::pair{8, 8}, std::pair{13, 9}}) {
        Grid g(1.0, 1.3, nx, ny);
        for (int rep = 0; rep < 20; ++rep) {
            TensorCellField s = random_tensor(g, rng);
            VelocityField v = random_velocity(g, rng, true);
            const double a = dot(g, gradient_adjoint(g, s), v);
            const double b = dot(g, s, velocity_gradient(g, v));
            CHECK(std::fabs(a - b) <= 1e-13 * (std::fabs(a) + std::fabs(b) + 1.0));
        }
        TensorCellField s = random_tensor(g, rng);
        CHECK(gradient_adjoint(g, s).max_normal_trace() == 0.0);
    }
}

TEST_CASE("average_adjoint pairs with center averaging") {
    std::mt19937 rng(303);
    Grid g(1.0, 1.0, 9, 14);
    for (int rep = 0; rep < 10; ++rep) {
        ScalarCellField m1 = random_cells(g, rng);
        ScalarCellField m2 = random_cells(g, rng);
        VelocityField v = random_velocity(g, rng, true);
        ScalarCellField v1c(g), v2c(g);
        average_to_centers(g, v, v1c, v2c);
        const double a = dot(g, average_adjoint(g, m1, m2), v);
        const double b = dot(g, m1, v1c) + dot(g, m2, v2c);
        CHECK(std::fabs(a - b) <= 1e-13 * (std::fabs(a) + std::fabs(b) + 1.0));
    }
}

TEST_CASE("norms reproduce closed forms on a constant field") {
    Grid g(2.0, 3.0, 8, 6);
    ScalarCellField p = sample_cells(g, [](double, double) { return -2.0; });
    CHECK(l2_norm(g, p) == doctest::Approx(2.0 * std::sqrt(6.0)).epsilon(1e-13));
    CHECK(l1_norm(g, p) == doctest::Approx(12.0).epsilon(1e-13));
    CHECK(linf_norm(p) == 2.0);
    CHECK(mean(g, p) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("Taylor-Green integrals approach their closed forms") {
    // on [0,pi]^2: |u|^2 integrates to pi^2/2, |grad u|^2 to pi^2,
    // and the squared second-gradient aggregate to 2 pi^2
    Grid g(kPi, kPi, 64, 64);
    VelocityField u = taylor_green(g);
    const double l2sq = std::pow(l2_norm(g, u), 2);
    const double h1sq = std::pow(h1_seminorm(g, u), 2);
    const double h2sq = std::pow(h2_seminorm(g, u), 2);
    CHECK(l2sq == doctest::Approx(kPi * kPi / 2.0).epsilon(2e-3));
    CHECK(h1sq == doctest::Approx(kPi * kPi).epsilon(5e-3));
    CHECK(h2sq == doctest::Approx(2.0 * kPi * kPi).epsilon(5e-2));
    const double vn = v_norm(g, u);
    CHECK(vn * vn == doctest::Approx(l2sq + h1sq).epsilon(1e-13));
}

TEST_CASE("Taylor-Green on a square-celled grid is discretely divergence-free") {
    Grid g(kPi, kPi, 32, 32);
    VelocityField u = taylor_green(g);
    CHECK(linf_norm(divergence(g, u)) <= 1e-12);
}

TEST_CASE("weighted gradient l1 matches the plain magnitude sum") {
    Grid g(1.0, 1.0, 8, 8);
    std::mt19937 rng(404);
    VelocityField u = random_velocity(g, rng, true);
    ScalarCellField one = sample_cells(g, [](double, double) { return 1.0; });
    TensorCellField t = velocity_gradient(g, u);
    CHECK(weighted_gradient_l1(g, one, u) ==
          doctest::Approx(l1_norm(g, tensor_magnitude(t))).epsilon(1e-13));
    ScalarCellField bad = one;
    bad.at(3, 3) = -1.0;
    CHECK_THROWS_AS(weighted_gradient_l1(g, bad, u), std::invalid_argument);
}

TEST_CASE("cell poisson solve inverts the discrete operator") {
    Grid g(1.0, 2.0, 16, 12);
    ScalarCellField phi = sample_cells(g, [](double x, double y) {
        return std::cos(kPi * x) * std::cos(kPi * y / 2.0);
    });
    const double shift = mean(g, phi);
    for (auto& v : phi.v) v -= shift;
    // rhs built from the discrete operator itself, so the solve must
    // reproduce phi up to the Krylov tolerance
    ScalarCellField rhs = divergence(g, pressure_gradient(g, phi));
    for (auto& v : rhs.v) v = -v;
    ScalarCellField sol(g);
    const int iters = solve_cell_poisson(g, rhs, sol, 1e-12, 4000);
    CHECK(iters > 0);
    ScalarCellField diff = axpy(-1.0, phi, sol);
    CHECK(l2_norm(g, diff) <= 1e-9 * std::max(1.0, l2_norm(g, phi)));
}

TEST_CASE("leray projection removes gradients and fixes divergence-free fields") {
    Grid g(kPi, kPi, 24, 24);
    std::mt19937 rng(505);

    VelocityField tg = taylor_green(g);
    VelocityField fixed = leray_project(g, tg);
    VelocityField diff = axpy(-1.0, tg, fixed);
    CHECK(l2_norm(g, diff) <= 1e-10 * l2_norm(g, tg));

    ScalarCellField p = random_cells(g, rng);
    VelocityField grad = pressure_gradient(g, p);
    VelocityField killed = leray_project(g, grad);
    CHECK(l2_norm(g, killed) <= 1e-9 * std::max(1.0, l2_norm(g, grad)));

    VelocityField noise = random_velocity(g, rng, true);
    VelocityField proj = leray_project(g, noise);
    CHECK(linf_norm(divergence(g, proj)) <= 1e-10 * std::max(1.0, linf_norm(noise)));
    VelocityField twice = leray_project(g, proj);
    VelocityField gap = axpy(-1.0, proj, twice);
    CHECK(l2_norm(g, gap) <= 1e-9 * std::max(1.0, l2_norm(g, proj)));
}

TEST_CASE("random slip fields are unit-size, slip-normal, and reproducible") {
    Grid g(1.0, 1.0, 16, 16);
    std::mt19937 a(42), b(42), c(43);
    VelocityField ua = random_slip_field(g, a);
    VelocityField ub = random_slip_field(g, b);
    VelocityField uc = random_slip_field(g, c);
    CHECK(ua.max_normal_trace() == 0.0);
    CHECK(v_norm(g, ua) == doctest::Approx(1.0).epsilon(1e-12));
    VelocityField same = axpy(-1.0, ua, ub);
    CHECK(l2_norm(g, same) == 0.0);  // identical seed, identical field
    VelocityField d = axpy(-1.0, ua, uc);
    CHECK(l2_norm(g, d) > 1e-3);
}

}  // TEST_SUITE
