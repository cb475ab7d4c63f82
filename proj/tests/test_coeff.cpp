// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "coeff.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"

using namespace meyerslab;

TEST_CASE("example d fixed values") {
    CHECK(example_d(1.0, 0.0, 0.3) == 0.0);
    // x = 0 branch with mu = 1/2: C_mu = -3/2, so d = -3 pi / 4.
    CHECK(example_d(0.0, 1.0, 0.5) == doctest::Approx(-3.0 * M_PI / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(example_d(0.0, 0.0, 0.5), Error);
}

TEST_CASE("example d essential sup matches pi(1-mu^2)/(2mu)") {
    const double mu = 0.5;
    const double sup = example_d_sup(mu);
    test_oracles::Rng rng(42);
    double max_abs = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        const double y = rng.uniform(-1.0, 1.0);
        if (x == 0.0 && y == 0.0) continue;
        max_abs = std::max(max_abs, std::abs(example_d(x, y, mu)));
    }
    CHECK(max_abs <= sup + 1e-15);
    CHECK(sup - max_abs <= 1e-3);
}

TEST_CASE("example d is odd under y -> -y") {
    test_oracles::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        const double y = rng.uniform(-2.0, 2.0);
        const double mu = rng.uniform(0.05, 0.95);
        if (y == 0.0 && x == 0.0) continue;
        if (y == 0.0) continue;
        CHECK(example_d(x, -y, mu) == doctest::Approx(-example_d(x, y, mu)).epsilon(1e-14));
    }
}

TEST_CASE("example quadratic form is exactly euclidean") {
    const CoefficientField field = CoefficientField::example(0.5);
    test_oracles::Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        const double y = rng.uniform(-1.0, 1.0);
        if (x == 0.0 && y == 0.0) continue;
        const Vec2 xi{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        const Mat2 a = field.eval_matrix(x, y);
        const double quad = xi.dot(a.apply(xi));
        CHECK(std::abs(quad - xi.norm2()) <= 1e-13 * std::max(1.0, xi.norm2()));
    }
    CHECK(field.lambda() == 1.0);

    const Mat2 at10 = field.eval_matrix(1.0, 0.0);
    CHECK(at10.a11 == 1.0);
    CHECK(at10.a12 == 0.0);
    CHECK(at10.a21 == 0.0);
    CHECK(at10.a22 == 1.0);

    const CoefficientField id = CoefficientField::identity();
    const Mat2 m = id.eval_matrix(0.3, -0.7);
    CHECK(m.a11 == 1.0);
    CHECK(m.a12 == 0.0);
}

TEST_CASE("oracle solution values and polar identity") {
    const OracleSolution oracle(0.5);
    CHECK(oracle.value(1.0, 0.0) == 1.0);
    CHECK(oracle.value(0.0, 0.7) == 0.0);
    CHECK_THROWS_AS(oracle.value(0.0, 0.0), Error);

    // u = r^mu cos(theta) at random points.
    test_oracles::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const double r = rng.uniform(0.01, 2.0);
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        const double x = r * std::cos(th);
        const double y = r * std::sin(th);
        const double expected = std::pow(r, 0.5) * std::cos(th);
        CHECK(oracle.value(x, y) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("oracle gradient matches long-double finite differences") {
    test_oracles::Rng rng(17);
    for (double mu : {0.25, 0.5, 0.75}) {
        const OracleSolution oracle(mu);
        const auto u_ld = [mu](long double x, long double y) {
            const long double r2 = x * x + y * y;
            return x * std::pow(r2, (static_cast<long double>(mu) - 1.0L) / 2.0L);
        };
        for (int i = 0; i < 100; ++i) {
            const double r = rng.uniform(0.3, 1.5);
            const double th = rng.uniform(0.0, 2.0 * M_PI);
            const double x = r * std::cos(th);
            const double y = r * std::sin(th);
            double gx, gy;
            test_oracles::gradient_fd(u_ld, x, y, &gx, &gy);
            const Vec2 g = oracle.gradient(x, y);
            CHECK(std::abs(g.norm() - std::hypot(gx, gy)) <= 1e-10);

            // Against the closed polar form as well.
            const double polar = std::pow(r, mu - 1.0) *
                std::sqrt(mu * mu * std::cos(th) * std::cos(th) +
                          std::sin(th) * std::sin(th));
            CHECK(g.norm() == doctest::Approx(polar).epsilon(1e-10));
        }
    }
}

namespace {

std::vector<Vec2> small_grid() {
    std::vector<Vec2> centers;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
            centers.push_back({0.45 * i, 0.45 * j});
    return centers;
}

} // namespace

TEST_CASE("bmo estimator is exactly zero on constants") {
    const auto constant_one = [](double, double) { return 1.0; };
    const BmoEstimate est = bmo_seminorm(constant_one, small_grid(), {1.0, 0.5}, 64);
    CHECK(est.value == 0.0); // multiplications by 1.0 are exact

    const auto constant_half = [](double, double) { return -0.5; };
    CHECK(bmo_seminorm(constant_half, small_grid(), {1.0, 0.25}, 64).value == 0.0);

    const auto constant_generic = [](double, double) { return 3.7; };
    CHECK(bmo_seminorm(constant_generic, small_grid(), {1.0}, 64).value <= 1e-13);
}

TEST_CASE("bmo mean oscillation of f = x over a ball is 4r/(3pi)") {
    // Frozen via the independent Cartesian oracle, then asserted against the
    // closed form 4r/(3pi).
    const auto f = [](double x, double) { return x; };
    const double brute =
        test_oracles::disk_mean_oscillation_cartesian(f, 0.3, -0.2, 1.0, 2001);
    const double analytic = 4.0 / (3.0 * M_PI);
    CHECK(brute == doctest::Approx(analytic).epsilon(2e-3));

    const BmoEstimate est = bmo_seminorm(f, {{0.3, -0.2}}, {1.0}, 256);
    CHECK(est.value == doctest::Approx(analytic).epsilon(1e-3));
    CHECK(est.value == doctest::Approx(brute).epsilon(3e-3));

    // Radius 1/2 scales the oscillation by 1/2.
    const BmoEstimate half = bmo_seminorm(f, {{0.0, 0.0}}, {0.5}, 256);
    CHECK(half.value == doctest::Approx(analytic / 2.0).epsilon(1e-3));
}

TEST_CASE("bmo estimator homogeneity and shift invariance") {
    const double mu = 0.5;
    const auto d = [mu](double x, double y) {
        if (x == 0.0 && y == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return example_d(x, y, mu);
    };
    const auto scaled = [&](double x, double y) { return -2.5 * d(x, y); };
    const auto shifted = [&](double x, double y) { return d(x, y) + 7.25; };

    const std::vector<Vec2> centers = small_grid();
    const std::vector<double> radii = {1.0, 0.5, 0.25};
    const BmoEstimate base = bmo_seminorm(d, centers, radii, 64);
    const BmoEstimate hom = bmo_seminorm(scaled, centers, radii, 64);
    const BmoEstimate shift = bmo_seminorm(shifted, centers, radii, 64);

    CHECK(hom.value == doctest::Approx(2.5 * base.value).epsilon(1e-12));
    CHECK(std::abs(shift.value - base.value) <= 1e-12 * std::max(1.0, base.value));
}

TEST_CASE("bmo estimate of the example d is positive and bounded") {
    const double mu = 0.5;
    const auto d = [mu](double x, double y) {
        if (x == 0.0 && y == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return example_d(x, y, mu);
    };
    const BmoEstimate est = bmo_seminorm_default(d, 11, 4, 64);
    CHECK(est.value > 0.0);
    CHECK(est.value <= 2.0 * example_d_sup(mu)); // 3 pi / 2 for mu = 1/2

    // Positivity certificate: a ball touching the y-axis sees the jump, so
    // its brute-force mean oscillation is strictly positive.
    const double brute = test_oracles::disk_mean_oscillation_cartesian(
        [&](double x, double y) { return example_d(x, y, mu); }, 0.0, 0.6, 0.3, 801);
    CHECK(brute > 0.1);
}

TEST_CASE("bmo estimate grows monotonically with the sample set") {
    const double mu = 0.4;
    const auto d = [mu](double x, double y) {
        if (x == 0.0 && y == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return example_d(x, y, mu);
    };
    const std::vector<Vec2> centers = small_grid();
    const BmoEstimate small = bmo_seminorm(d, centers, {1.0, 0.5}, 64);
    const BmoEstimate big = bmo_seminorm(d, centers, {1.0, 0.5, 0.25, 0.125}, 64);
    CHECK(big.value >= small.value);
}

TEST_CASE("bmo estimator rejects heavily undefined fields") {
    const auto bad = [](double x, double y) {
        if (x < 0.5) return std::numeric_limits<double>::quiet_NaN();
        return x + y;
    };
    CHECK_THROWS_AS(bmo_seminorm(bad, {{0.0, 0.0}}, {1.0}, 64), Error);
}
