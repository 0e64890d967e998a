#include <cmath>
#include <random>

#include "bingham2d/frame.hpp"
#include "doctest.h"

using namespace bingham2d;

namespace {

using Terms = std::vector<HeightFunction::PolyTerm>;

HeightFunction random_height(std::mt19937& rng, int surface_dim) {
    std::uniform_real_distribution<double> coef(-0.5, 0.5);
    Terms terms;
    for (int px = 0; px <= 4; ++px)
        for (int py = 0; py <= (surface_dim == 2 ? 4 - px : 0); ++py) {
            if (px + py == 0) continue;  // rho(0) = 0
            if (px + py > 4) continue;
            terms.push_back({px, py, coef(rng)});
        }
    return HeightFunction::polynomial(surface_dim, terms);
}

}  // namespace

TEST_SUITE("frame") {

TEST_CASE("height function construction enforces its invariants") {
    CHECK_THROWS_AS(HeightFunction::polynomial(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(HeightFunction::polynomial(3, {}), std::invalid_argument);
    CHECK_THROWS_AS(HeightFunction::polynomial(1, Terms{{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(HeightFunction::polynomial(1, Terms{{5, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(HeightFunction::polynomial(1, Terms{{2, 3, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(HeightFunction::polynomial(1, Terms{{1, 1, 1.0}}), std::invalid_argument);
    CHECK_NOTHROW(HeightFunction::polynomial(1, Terms{{2, 0, 0.5}}));
    CHECK_NOTHROW(HeightFunction::polynomial(2, Terms{{2, 2, 0.5}}));

    // callables must also vanish at the chart origin
    CHECK_THROWS_AS(
        HeightFunction::from_callable(1, [](const Eigen::VectorXd&) { return 1.0; }),
        std::invalid_argument);
    CHECK_NOTHROW(HeightFunction::from_callable(
        1, [](const Eigen::VectorXd& y) { return std::sin(0.3 * y(0)); }));
}

TEST_CASE("polynomial values and gradients match hand expansion") {
    // rho(a, b) = 0.5 a^2 b - 0.25 b^3
    HeightFunction rho = HeightFunction::polynomial(2, Terms{{2, 1, 0.5}, {0, 3, -0.25}});
    Eigen::VectorXd yp(2);
    yp << 1.5, -2.0;
    CHECK(rho.value(yp) == doctest::Approx(0.5 * 2.25 * (-2.0) - 0.25 * (-8.0)).epsilon(1e-15));
    Eigen::VectorXd grad = rho.gradient(yp);
    CHECK(grad(0) == doctest::Approx(1.0 * 1.5 * (-2.0)).epsilon(1e-15));
    CHECK(grad(1) == doctest::Approx(0.5 * 2.25 - 0.75 * 4.0).epsilon(1e-15));
}

TEST_CASE("finite-difference gradients track analytic ones") {
    HeightFunction poly = HeightFunction::polynomial(1, Terms{{1, 0, 0.7}, {3, 0, -0.2}});
    HeightFunction fd = HeightFunction::from_callable(1, [](const Eigen::VectorXd& y) {
        return 0.7 * y(0) - 0.2 * y(0) * y(0) * y(0);
    });
    CHECK(poly.analytic());
    CHECK(!fd.analytic());
    CHECK(poly.derivative_tolerance() < fd.derivative_tolerance());
    for (double a : {-0.8, -0.1, 0.0, 0.4, 1.2}) {
        Eigen::VectorXd yp(1);
        yp << a;
        CHECK(std::fabs(poly.gradient(yp)(0) - fd.gradient(yp)(0)) <= 1e-8);
    }
}

TEST_CASE("flatten map lands wall points on the graph and shifts along the slope") {
    HeightFunction rho = HeightFunction::polynomial(1, Terms{{2, 0, 1.0}});  // rho = y1^2
    Eigen::VectorXd y(2);
    y << 0.75, 0.0;
    Eigen::VectorXd on_wall = flatten_map(rho, y);
    CHECK(on_wall(0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(on_wall(1) == doctest::Approx(0.5625).epsilon(1e-15));

    y << 0.75, 0.2;  // fluid side: below the graph, shifted by 0.2 * rho'
    Eigen::VectorXd inside = flatten_map(rho, y);
    CHECK(inside(0) == doctest::Approx(0.75 + 0.2 * 1.5).epsilon(1e-15));
    CHECK(inside(1) == doctest::Approx(0.5625 - 0.2).epsilon(1e-15));
}

TEST_CASE("frame matrices match the hand formulas for a linear profile") {
    // rho = a y1: grad = a, q = a^2 + 1
    const double a = 0.6;
    HeightFunction rho = HeightFunction::polynomial(1, Terms{{1, 0, a}});
    Eigen::VectorXd yp(1);
    yp << 0.3;
    FrameMatrices fm = frame_matrices(rho, yp);
    const double q = a * a + 1.0;
    CHECK(fm.scale == doctest::Approx(std::sqrt(q)).epsilon(1e-15));
    CHECK(fm.psi(0, 0) == 1.0);
    CHECK(fm.psi(0, 1) == doctest::Approx(a));
    CHECK(fm.psi(1, 0) == doctest::Approx(a));
    CHECK(fm.psi(1, 1) == -1.0);
    CHECK(fm.phi(0, 0) == doctest::Approx(1.0 / q));
    CHECK(fm.phi(0, 1) == doctest::Approx(a / q));
    CHECK(fm.phi(1, 0) == doctest::Approx(a / q));
    CHECK(fm.phi(1, 1) == doctest::Approx(-1.0 / q));
}

TEST_CASE("identity suite stays below tolerance over randomized charts") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    for (int sdim : {1, 2}) {
        double worst = 0.0;
        for (int rep = 0; rep < 250; ++rep) {
            HeightFunction rho = random_height(rng, sdim);
            Eigen::VectorXd yp(sdim);
            for (int k = 0; k < sdim; ++k) yp(k) = box(rng);
            worst = std::max(worst, check_frame_identities(rho, yp).max_residual());
        }
        CHECK(worst <= 1e-11);
    }
}

TEST_CASE("graph normal is an outward unit vector orthogonal to the tangents") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        HeightFunction rho = random_height(rng, 2);
        Eigen::VectorXd yp(2);
        std::uniform_real_distribution<double> box(-1.0, 1.0);
        yp << box(rng), box(rng);
        const Eigen::VectorXd n = graph_normal(rho, yp);
        CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(n(2) > 0.0);  // points from the fluid (below the graph) upward
        const Eigen::VectorXd grad = rho.gradient(yp);
        // tangents of the graph x3 = rho(x1, x2)
        Eigen::Vector3d t1(1.0, 0.0, grad(0)), t2(0.0, 1.0, grad(1));
        CHECK(std::fabs(n.dot(t1)) <= 1e-13 * (1.0 + grad.norm()));
        CHECK(std::fabs(n.dot(t2)) <= 1e-13 * (1.0 + grad.norm()));
    }
}

TEST_CASE("tangent vectors have vanishing flat-frame normal component") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> box(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        HeightFunction rho = random_height(rng, 1);
        Eigen::VectorXd yp(1);
        yp << box(rng);
        const FrameMatrices fm = frame_matrices(rho, yp);
        Eigen::VectorXd tangent(2);
        tangent << 1.0, fm.grad_rho(0);  // tangent to the graph
        const Eigen::VectorXd flat = to_flat_frame(fm, tangent);
        CHECK(std::fabs(flat(1)) <= 1e-13 * (1.0 + tangent.norm()));
        // and back
        const Eigen::VectorXd back = from_flat_frame(fm, flat);
        CHECK((back - tangent).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + tangent.norm()));
    }
}

TEST_CASE("the wall Jacobian of the flattening map is the frame matrix") {
    // independent oracle: differentiate flatten_map numerically at y_d = 0
    // and compare against psi
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> box(-0.8, 0.8);
    for (int sdim : {1, 2}) {
        for (int rep = 0; rep < 20; ++rep) {
            HeightFunction rho = random_height(rng, sdim);
            const int d = sdim + 1;
            Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
            for (int k = 0; k < sdim; ++k) y(k) = box(rng);
            const FrameMatrices fm = frame_matrices(rho, y.head(sdim));

            const double step = 1e-5;
            Eigen::MatrixXd jac(d, d);
            for (int c = 0; c < d; ++c) {
                Eigen::VectorXd hi = y, lo = y;
                hi(c) += step;
                lo(c) -= step;
                jac.col(c) = (flatten_map(rho, hi) - flatten_map(rho, lo)) / (2.0 * step);
            }
            CHECK((jac - fm.psi).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }
}

TEST_CASE("identity report fields are all populated by a curved chart") {
    HeightFunction rho = HeightFunction::polynomial(1, Terms{{2, 0, 0.4}, {3, 0, -0.15}});
    Eigen::VectorXd yp(1);
    yp << 0.5;
    const FrameIdentityReport rep = check_frame_identities(rho, yp);
    CHECK(rep.max_residual() <= 1e-11);
    CHECK(rep.max_residual() >=
          std::max({rep.inverse_residual, rep.symmetry_residual, rep.tangency_residual}));
}

}  // TEST_SUITE
