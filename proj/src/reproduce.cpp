// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>

#include "analysis.hpp"
#include "coeff.hpp"
#include "error.hpp"
#include "fem.hpp"
#include "mesh.hpp"

namespace meyerslab {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

ReproduceRow lp_row(double mu) {
    const double target = 2.0 / (1.0 - mu);
    const double step = 0.1;
    const auto grid = default_p_grid(2.0, target + 2.0, step);
    const auto radii = default_dyadic_radii(0.4, 9);
    const ThresholdScan scan =
        integrability_threshold(GradientSource::oracle(mu), grid, radii, 3);
    ReproduceRow row;
    row.mu = mu;
    row.check = "lp-threshold";
    row.value = scan.p_star;
    row.target = format_double(target) + " +/- " + format_double(0.15 + step);
    row.pass = std::abs(scan.p_star - target) <= 0.15 + step;
    return row;
}

ReproduceRow holder_row(double mu) {
    const OracleSolution oracle(mu);
    std::vector<double> scales;
    for (int k = 2; k <= 13; ++k) scales.push_back(std::pow(2.0, -k));
    const HolderEstimate est = holder_exponent(
        [&](double x, double y) { return oracle.value(x, y); }, 0.0, scales, 64);
    ReproduceRow row;
    row.mu = mu;
    row.check = "holder-exponent";
    row.value = est.alpha;
    row.target = format_double(mu) + " +/- 1e-06";
    row.pass = std::abs(est.alpha - mu) <= 1e-6;
    return row;
}

ReproduceRow meyers_row(double mu) {
    // Oracle boundary data on a graded disk mesh; the scan tracks how the
    // p = 4 quotient scales along balls shrinking into the origin.
    auto mesh = std::make_shared<const Mesh>(
        Mesh::build_disk(20, 32, 2.0).refine().refine());
    auto field = std::make_shared<const CoefficientField>(CoefficientField::example(mu));
    const OracleSolution oracle(mu);

    SolveOptions opts;
    opts.tol = 1e-10;
    opts.max_iter = 6000;
    LinearSolveReport solve_report;
    const FemSolution sol = solve_problem(
        mesh, field, nullptr,
        [&](double x, double y) { return oracle.value(x, y); }, opts, solve_report);

    const WeightedSamples samples = samples_from_fem(sol, nullptr, 3);
    const auto radii = default_dyadic_radii(0.4, 9);
    const std::vector<Vec2> centers(radii.size(), Vec2{0.0, 0.0});
    const RHScanResult scan =
        reverse_holder_scan(samples, centers, radii, {2.0, 3.0, 4.0, 5.0, 6.0});

    const ExponentFit fit = fit_exponent(radii, scan.ratios[2]); // p = 4
    const double expected = std::min(1.0 - mu, 0.5);
    ReproduceRow row;
    row.mu = mu;
    row.check = "degeneration-scan";
    row.value = -fit.slope;
    row.target = format_double(expected) + " +/- 0.2";
    row.pass = std::abs(-fit.slope - expected) <= 0.2;
    return row;
}

ReproduceRow bmo_row(double mu) {
    const ScalarField d = [mu](double x, double y) {
        if (x == 0.0 && y == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return example_d(x, y, mu);
    };
    const BmoEstimate coarse = bmo_seminorm_default(d, 21, 6, 64);
    const BmoEstimate fine = bmo_seminorm_default(d, 21, 6, 128);
    const double bound = 2.0 * example_d_sup(mu);
    ReproduceRow row;
    row.mu = mu;
    row.check = "bmo-estimate";
    row.value = fine.value;
    row.target = "(0, " + format_double(bound) + "], drift <= 5%";
    row.pass = fine.value > 0.0 && fine.value <= bound &&
               std::abs(fine.value - coarse.value) <= 0.05 * fine.value;
    return row;
}

} // namespace

ReproduceReport reproduce_paper(const std::string& out_dir, std::uint64_t seed) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const fs::path report_path = fs::path(out_dir) / "report.md";
    const fs::path summary_path = fs::path(out_dir) / "summary.json";
    require(!fs::exists(report_path), ErrorCode::invalid_argument,
            "report.md already exists; artifacts are write-once per run directory");

    ReproduceReport report;
    for (double mu : {0.25, 0.5, 0.75}) {
        report.rows.push_back(lp_row(mu));
        report.rows.push_back(holder_row(mu));
        report.rows.push_back(meyers_row(mu));
        report.rows.push_back(bmo_row(mu));
    }
    report.all_pass = true;
    for (const ReproduceRow& row : report.rows) report.all_pass &= row.pass;

    std::FILE* f = std::fopen(report_path.string().c_str(), "w");
    if (!f)
        fail(ErrorCode::io_failure, "cannot write '" + report_path.string() + "'");
    std::fprintf(f, "# Verification matrix\n\n");
    std::fprintf(f, "seed: %llu\n\n", static_cast<unsigned long long>(seed));
    std::fprintf(f, "| mu | check | value | target | status |\n");
    std::fprintf(f, "|----|-------|-------|--------|--------|\n");
    for (const ReproduceRow& row : report.rows)
        std::fprintf(f, "| %.2f | %s | %.10g | %s | %s |\n", row.mu,
                     row.check.c_str(), row.value, row.target.c_str(),
                     row.pass ? "pass" : "FAIL");
    std::fprintf(f, "\nresult: %s\n", report.all_pass ? "all rows pass" : "FAILURES");
    std::fclose(f);

    f = std::fopen(summary_path.string().c_str(), "w");
    if (!f)
        fail(ErrorCode::io_failure, "cannot write '" + summary_path.string() + "'");
    std::fprintf(f, "{\n  \"seed\": %llu,\n  \"rows\": [\n",
                 static_cast<unsigned long long>(seed));
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const ReproduceRow& row = report.rows[i];
        std::fprintf(f,
                     "    {\"mu\": %.2f, \"check\": \"%s\", \"value\": %.17g, "
                     "\"pass\": %s}%s\n",
                     row.mu, row.check.c_str(), row.value,
                     row.pass ? "true" : "false",
                     i + 1 < report.rows.size() ? "," : "");
    }
    std::fprintf(f, "  ],\n  \"all_pass\": %s\n}\n",
                 report.all_pass ? "true" : "false");
    std::fclose(f);

    return report;
}

} // namespace meyerslab
