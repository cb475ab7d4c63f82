// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <memory>

#include "analysis.hpp"
#include "coeff.hpp"
#include "doctest.h"
#include "error.hpp"
#include "fem.hpp"
#include "mesh.hpp"
#include "oracles.hpp"

using namespace meyerslab;

namespace {

std::shared_ptr<const FemSolution> interpolant_of_x(int rings, int sectors) {
    auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(rings, sectors, 1.0));
    auto field =
        std::make_shared<const CoefficientField>(CoefficientField::identity());
    std::vector<double> coeffs(mesh->num_vertices());
    for (int i = 0; i < mesh->num_vertices(); ++i) coeffs[i] = mesh->vertex(i).x;
    return std::make_shared<const FemSolution>(mesh, field, coeffs);
}

} // namespace

TEST_CASE("lp norm of |grad x| = 1 equals area^(1/p) exactly on the full domain") {
    const auto sol = interpolant_of_x(4, 16);
    const double area = sol->mesh().total_area();
    for (double p : {1.0, 2.0, 3.5}) {
        const double value =
            lp_norm_gradient(*sol, Region::ball({0.0, 0.0}, 2.0), p, 3);
        CHECK(value == doctest::Approx(std::pow(area, 1.0 / p)).epsilon(1e-12));
    }
}

TEST_CASE("lp norm clipped to an annulus approximates the region area") {
    const auto sol = interpolant_of_x(24, 96);
    const Region region = Region::annulus({0.0, 0.0}, 0.3, 0.8);
    const double s = M_PI * (0.8 * 0.8 - 0.3 * 0.3);
    const double value = lp_norm_gradient(*sol, region, 2.0, 6);
    CHECK(value == doctest::Approx(std::sqrt(s)).epsilon(0.02));

    CHECK_THROWS_AS(
        lp_norm_gradient(*sol, Region::ball({5.0, 5.0}, 0.01), 2.0, 3), Error);
}

TEST_CASE("oracle L2 integral over an annulus matches brute force and closed form") {
    // mu = 1/2, p = 2 over annulus (1/4, 1/2):
    // closed form pi (mu^2+1) [r^(2mu)/(2mu)] = 0.3125 pi ~ 0.98175.
    const double mu = 0.5;
    const double integral = oracle_lp_integral(mu, 2.0, 0.25, 0.5);
    CHECK(integral == doctest::Approx(0.3125 * M_PI).epsilon(1e-10));

    const OracleSolution oracle(mu);
    const double brute = test_oracles::annulus_integral_cartesian(
        [&](double x, double y) { return oracle.gradient(x, y).norm2(); }, 0.25,
        0.5, 4001);
    CHECK(integral == doctest::Approx(brute).epsilon(1e-3));

    const double norm =
        lp_norm_gradient_oracle(mu, Region::annulus({0, 0}, 0.25, 0.5), 2.0);
    CHECK(norm == doctest::Approx(0.990834).epsilon(1e-5));
}

TEST_CASE("fem L2 gradient norm matches the oracle away from the origin") {
    auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(16, 64, 2.0));
    auto field =
        std::make_shared<const CoefficientField>(CoefficientField::example(0.5));
    const OracleSolution oracle(0.5);
    SolveOptions opts;
    opts.max_iter = 4000;
    LinearSolveReport report;
    const FemSolution sol = solve_problem(
        mesh, field, nullptr,
        [&](double x, double y) { return oracle.value(x, y); }, opts, report);
    const Region region = Region::annulus({0, 0}, 0.25, 0.5);
    const double fem_norm = lp_norm_gradient(sol, region, 2.0, 3);
    const double exact = lp_norm_gradient_oracle(0.5, region, 2.0);
    CHECK(fem_norm == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("annulus scan of the oracle: convergent, critical, and divergent") {
    const double mu = 0.5;
    const GradientSource source = GradientSource::oracle(mu);
    const auto radii = default_dyadic_radii(0.4, 9);

    SUBCASE("subcritical p converges geometrically") {
        const AnnulusSeries series = annulus_scan(source, 3.0, radii, 3);
        for (std::size_t k = 1; k < series.values.size(); ++k)
            CHECK(series.values[k] >= series.values[k - 1]);
        // Increment ratio tends to 2^-a with a = (mu-1)p + 2 = 0.5.
        for (std::size_t k = 2; k < series.values.size(); ++k) {
            const double d1 = series.values[k] - series.values[k - 1];
            const double d0 = series.values[k - 1] - series.values[k - 2];
            CHECK(d1 / d0 == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-6));
        }
    }

    SUBCASE("critical p = 4 has constant dyadic increments") {
        const AnnulusSeries series = annulus_scan(source, 4.0, radii, 3);
        std::vector<double> increments;
        for (std::size_t k = 1; k < series.values.size(); ++k)
            increments.push_back(series.values[k] - series.values[k - 1]);
        for (std::size_t k = 1; k < increments.size(); ++k)
            CHECK(std::abs(increments[k] / increments[0] - 1.0) <= 0.05);
    }

    SUBCASE("p = 6 grows like 1/r") {
        const AnnulusSeries series = annulus_scan(source, 6.0, radii, 3);
        const ExponentFit fit = fit_annulus_increments(series);
        CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-6));
        // The total also scales like 1/r once divergence dominates.
        CHECK(series.values.back() / series.values.front() > 50.0);
    }
}

TEST_CASE("exponent fit recovers exact powers") {
    std::vector<double> radii, values;
    for (int k = 0; k < 10; ++k) {
        const double r = 0.4 * std::pow(2.0, -k);
        radii.push_back(r);
        values.push_back(3.2 * std::pow(r, -0.75));
    }
    const ExponentFit fit = fit_exponent(radii, values);
    CHECK(std::abs(fit.slope + 0.75) <= 1e-10);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fit.intercept - std::log(3.2)) <= 1e-10);
}

TEST_CASE("exponent fit flags degenerate inputs") {
    // Constant data over a wide span: slope 0.
    std::vector<double> radii, values;
    for (int k = 0; k < 8; ++k) {
        radii.push_back(std::pow(2.0, -k));
        values.push_back(5.0);
    }
    const ExponentFit fit = fit_exponent(radii, values);
    CHECK(std::abs(fit.slope) <= 1e-12);

    // Span below two orders of magnitude.
    CHECK_THROWS_AS(fit_exponent({0.4, 0.2, 0.1, 0.05}, {1.0, 1.0, 1.0, 1.0}),
                    Error);
    // Too few points.
    CHECK_THROWS_AS(fit_exponent({0.4, 0.001}, {1.0, 1.0}), Error);
}

TEST_CASE("integrability threshold lands at 2/(1-mu) on the analytic oracle") {
    for (double mu : {0.5, 0.75}) {
        const double target = 2.0 / (1.0 - mu);
        const auto grid = default_p_grid(2.0, target + 2.0, 0.1);
        const auto radii = default_dyadic_radii(0.4, 9);
        const ThresholdScan scan =
            integrability_threshold(GradientSource::oracle(mu), grid, radii, 3);
        CHECK(std::abs(scan.p_star - target) <= 0.15 + 0.1);
    }
}

TEST_CASE("integrability threshold over random mu (property)") {
    test_oracles::Rng rng(2026);
    for (int trial = 0; trial < 6; ++trial) {
        const double mu = rng.uniform(0.25, 0.8);
        CAPTURE(mu);
        const double target = 2.0 / (1.0 - mu);
        const auto grid = default_p_grid(2.0, target + 2.0, 0.1);
        const auto radii = default_dyadic_radii(0.4, 9);
        const ThresholdScan scan =
            integrability_threshold(GradientSource::oracle(mu), grid, radii, 3);
        CHECK(std::abs(scan.p_star - target) <= 0.15 + 0.1);
    }
}

TEST_CASE("holder exponent of the oracle is exactly mu") {
    for (double mu : {0.25, 0.5, 0.75}) {
        const OracleSolution oracle(mu);
        std::vector<double> scales;
        for (int k = 2; k <= 11; ++k) scales.push_back(std::pow(2.0, -k));
        const HolderEstimate est = holder_exponent(
            [&](double x, double y) { return oracle.value(x, y); }, 0.0, scales, 64);
        CHECK(std::abs(est.alpha - mu) <= 1e-10);
        // M(r) = r^mu exactly when the angle grid contains theta = 0.
        CHECK(est.moduli[0] == doctest::Approx(std::pow(0.25, mu)).epsilon(1e-14));
    }
}

TEST_CASE("holder exponent of a linear function is 1") {
    std::vector<double> scales;
    for (int k = 2; k <= 9; ++k) scales.push_back(std::pow(2.0, -k));
    const HolderEstimate est = holder_exponent(
        [](double x, double y) { return 0.3 * x - 1.1 * y + 2.0; }, 2.0, scales, 64);
    CHECK(std::abs(est.alpha - 1.0) <= 1e-10);
}

TEST_CASE("energy ratio equals one for Galerkin-consistent data") {
    auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(4, 16, 1.0));
    auto field =
        std::make_shared<const CoefficientField>(CoefficientField::identity());

    // v: P1 hat function on an interior vertex (zero boundary data).
    std::vector<double> v(mesh->num_vertices(), 0.0);
    const std::vector<int> interior = mesh->interior_vertices();
    v[interior[interior.size() / 2]] = 1.0;

    const MeshLocator locator(*mesh);
    const VectorField grad_v = [&, mesh](double x, double y) {
        const int t = locator.locate({x, y});
        if (t < 0) return Vec2{0.0, 0.0};
        const ElementGeometry g = mesh->element_geometry(t);
        Vec2 grad{0.0, 0.0};
        for (int i = 0; i < 3; ++i)
            grad = grad + v[mesh->triangle(t).v[i]] * g.grad_basis[i];
        return grad;
    };

    SolveOptions opts;
    opts.tol = 1e-13;
    LinearSolveReport report;
    const FemSolution sol = solve_problem(mesh, field, grad_v, nullptr, opts, report);
    CHECK(report.converged);
    CHECK(energy_ratio(sol, grad_v, 3) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("energy ratio error paths and the divergence-free constant case") {
    auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(3, 12, 1.0));
    auto field =
        std::make_shared<const CoefficientField>(CoefficientField::example(0.5));
    SolveOptions opts;
    LinearSolveReport report;

    // F = (1,0) is divergence-free: the weak load vanishes and u_h = 0, so
    // the ratio is 0 at every level.
    const VectorField f_const = [](double, double) { return Vec2{1.0, 0.0}; };
    const FemSolution sol = solve_problem(mesh, field, f_const, nullptr, opts, report);
    CHECK(energy_ratio(sol, f_const, 3) <= 1e-16);

    CHECK_THROWS_AS(
        energy_ratio(sol, [](double, double) { return Vec2{0.0, 0.0}; }, 3), Error);
}

TEST_CASE("energy ratio is stable across refinements for a fixed right side") {
    auto field =
        std::make_shared<const CoefficientField>(CoefficientField::example(0.5));
    const VectorField F = [](double x, double y) { return Vec2{x, y}; };
    std::vector<double> ratios;
    for (int level = 0; level < 3; ++level) {
        auto mesh = std::make_shared<const Mesh>([&] {
            Mesh m = Mesh::build_disk(6, 24, 1.0);
            for (int i = 0; i < level; ++i) m = m.refine();
            return m;
        }());
        SolveOptions opts;
        LinearSolveReport report;
        const FemSolution sol = solve_problem(mesh, field, F, nullptr, opts, report);
        ratios.push_back(energy_ratio(sol, F, 6));
    }
    const double lo = std::min({ratios[0], ratios[1], ratios[2]});
    const double hi = std::max({ratios[0], ratios[1], ratios[2]});
    CHECK(hi - lo <= 0.1 * hi);
}

TEST_CASE("caccioppoli ratio: constants, harmonic stability, oracle") {
    auto field =
        std::make_shared<const CoefficientField>(CoefficientField::identity());

    SUBCASE("constant solutions give ratio zero") {
        auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(4, 16, 1.0));
        std::vector<double> coeffs(mesh->num_vertices(), 3.0);
        const FemSolution sol(mesh, field, coeffs);
        CHECK(caccioppoli_ratio(sol, nullptr, {0.2, 0.1}, 0.2, 1.5, 1.0, 3) == 0.0);
    }

    SUBCASE("region-too-small is reported") {
        auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(3, 8, 1.0));
        std::vector<double> coeffs(mesh->num_vertices(), 0.0);
        const FemSolution sol(mesh, field, coeffs);
        CHECK_THROWS_AS(
            caccioppoli_ratio(sol, nullptr, {0.9, 0.9}, 1e-4, 1.5, 1.0, 3), Error);
    }

    SUBCASE("discrete-harmonic interior ratio is stable under refinement") {
        std::vector<double> ratios;
        for (int level = 0; level < 3; ++level) {
            auto mesh = std::make_shared<const Mesh>([&] {
                Mesh m = Mesh::build_disk(6, 24, 1.0);
                for (int i = 0; i < level; ++i) m = m.refine();
                return m;
            }());
            SolveOptions opts;
            LinearSolveReport report;
            const FemSolution sol = solve_problem(
                mesh, field, nullptr,
                [](double x, double y) { return x + 0.5 * (x * x - y * y); }, opts,
                report);
            ratios.push_back(
                caccioppoli_ratio(sol, nullptr, {0.25, 0.0}, 0.2, 1.5, 0.0, 3));
        }
        for (double r : ratios) CHECK(std::isfinite(r));
        const double lo = std::min({ratios[0], ratios[1], ratios[2]});
        const double hi = std::max({ratios[0], ratios[1], ratios[2]});
        CHECK(hi <= 2.0 * lo);
    }

    SUBCASE("example field with oracle data stays finite away from the origin") {
        auto ex_field = std::make_shared<const CoefficientField>(
            CoefficientField::example(0.5));
        const OracleSolution oracle(0.5);
        const double d_bmo = example_d_sup(0.5); // measured bound stand-in
        std::vector<double> ratios;
        for (int level = 0; level < 2; ++level) {
            auto mesh = std::make_shared<const Mesh>([&] {
                Mesh m = Mesh::build_disk(8, 32, 2.0);
                for (int i = 0; i < level; ++i) m = m.refine();
                return m;
            }());
            SolveOptions opts;
            opts.max_iter = 4000;
            LinearSolveReport report;
            const FemSolution sol = solve_problem(
                mesh, ex_field, nullptr,
                [&](double x, double y) { return oracle.value(x, y); }, opts,
                report);
            ratios.push_back(
                caccioppoli_ratio(sol, nullptr, {0.4, 0.2}, 0.15, 1.5, d_bmo, 3));
        }
        for (double r : ratios) {
            CHECK(std::isfinite(r));
            CHECK(r >= 0.0);
        }
        CHECK(std::max(ratios[0], ratios[1]) <=
              2.0 * std::min(ratios[0], ratios[1]));
    }
}

TEST_CASE("reverse holder scan basics") {
    SUBCASE("constant g with zero f gives ratio one everywhere") {
        WeightedSamples samples;
        test_oracles::Rng rng(1);
        for (int i = 0; i < 2000; ++i) {
            const double r = std::sqrt(rng.uniform());
            const double th = rng.uniform(0.0, 2.0 * M_PI);
            samples.pts.push_back({r * std::cos(th), r * std::sin(th)});
            samples.w.push_back(1.0);
            samples.g.push_back(4.0);
            samples.f.push_back(0.0);
        }
        const auto radii = default_dyadic_radii(0.4, 5);
        const std::vector<Vec2> centers(radii.size(), Vec2{0, 0});
        const RHScanResult scan =
            reverse_holder_scan(samples, centers, radii, {2.0, 4.0, 8.0});
        for (const auto& row : scan.ratios)
            for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(scan.p_star == 8.0);
    }

    SUBCASE("ratios are invariant under simultaneous scaling of g and f") {
        WeightedSamples a;
        test_oracles::Rng rng(2);
        for (int i = 0; i < 3000; ++i) {
            const double x = rng.uniform(-0.9, 0.9);
            const double y = rng.uniform(-0.9, 0.9);
            a.pts.push_back({x, y});
            a.w.push_back(rng.uniform(0.5, 1.5));
            a.g.push_back(std::exp(x) + 0.1);
            a.f.push_back(std::abs(y) + 0.2);
        }
        WeightedSamples b = a;
        for (double& v : b.g) v *= 37.5;
        for (double& v : b.f) v *= 37.5;
        const auto radii = default_dyadic_radii(0.4, 4);
        const std::vector<Vec2> centers(radii.size(), Vec2{0, 0});
        const auto grid = default_p_grid(2.0, 6.0, 1.0);
        const RHScanResult sa = reverse_holder_scan(a, centers, radii, grid);
        const RHScanResult sb = reverse_holder_scan(b, centers, radii, grid);
        for (std::size_t ip = 0; ip < grid.size(); ++ip)
            for (std::size_t ball = 0; ball < radii.size(); ++ball)
                CHECK(sa.ratios[ip][ball] ==
                      doctest::Approx(sb.ratios[ip][ball]).epsilon(1e-12));
    }

    SUBCASE("empty balls are rejected") {
        WeightedSamples samples;
        samples.pts.push_back({0.9, 0.0});
        samples.w.push_back(1.0);
        samples.g.push_back(1.0);
        samples.f.push_back(0.0);
        CHECK_THROWS_AS(
            reverse_holder_scan(samples, {{0.0, 0.0}}, {0.01}, {2.0}), Error);
    }
}

TEST_CASE("degeneration scan: example field grows, identity control stays flat") {
    // Identity control: u = x has |grad| = 1, so every quotient is ~1.
    auto mesh = std::make_shared<const Mesh>(Mesh::build_disk(16, 32, 2.0).refine());
    auto id_field =
        std::make_shared<const CoefficientField>(CoefficientField::identity());
    SolveOptions opts;
    opts.max_iter = 4000;
    LinearSolveReport report;
    const FemSolution control = solve_problem(
        mesh, id_field, nullptr, [](double x, double) { return x; }, opts, report);

    const auto radii = default_dyadic_radii(0.4, 7);
    const std::vector<Vec2> centers(radii.size(), Vec2{0, 0});
    const WeightedSamples control_samples = samples_from_fem(control, nullptr, 3);
    const RHScanResult control_scan =
        reverse_holder_scan(control_samples, centers, radii, {2.0, 4.0, 8.0});
    for (const auto& row : control_scan.ratios) {
        const double lo = *std::min_element(row.begin(), row.end());
        const double hi = *std::max_element(row.begin(), row.end());
        CHECK(hi <= 2.0 * lo);
    }

    // Example field at the critical exponent p = 4 for mu = 1/2.
    auto ex_field =
        std::make_shared<const CoefficientField>(CoefficientField::example(0.5));
    const OracleSolution oracle(0.5);
    const FemSolution singular = solve_problem(
        mesh, ex_field, nullptr,
        [&](double x, double y) { return oracle.value(x, y); }, opts, report);
    const WeightedSamples samples = samples_from_fem(singular, nullptr, 3);
    const RHScanResult scan =
        reverse_holder_scan(samples, centers, radii, {2.0, 4.0});
    const auto& p4 = scan.ratios[1];
    CHECK(p4.back() / p4.front() > 4.0); // shallow family; acceptance uses 9 balls
    for (std::size_t k = 1; k < p4.size(); ++k) CHECK(p4[k] > p4[k - 1]);
}

TEST_CASE("oracle-sample scan grows without bound at the critical exponent") {
    const WeightedSamples samples = samples_from_oracle(0.5, 1e-5, 400, 64);
    const auto radii = default_dyadic_radii(0.4, 9);
    const std::vector<Vec2> centers(radii.size(), Vec2{0, 0});
    const RHScanResult scan = reverse_holder_scan(samples, centers, radii, {4.0});
    CHECK(scan.ratios[0].back() / scan.ratios[0].front() >= 10.0);
}
