// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library C interface: handle lifecycles, error codes,
// and the file surfaces the CLI depends on.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "meyerslab.h"

namespace {

std::string temp_path(const char* name) {
    return std::string("capi_test_") + name;
}

} // namespace

TEST_CASE("mesh lifecycle, accessors, and serialization") {
    mey_mesh* mesh = nullptr;
    REQUIRE(mey_mesh_create_disk(2, 8, 1.0, &mesh) == MEY_OK);
    CHECK(mey_mesh_num_vertices(mesh) == 17);
    CHECK(mey_mesh_num_triangles(mesh) == 24);
    CHECK(mey_mesh_check(mesh) == MEY_OK);

    double x, y;
    int bdry;
    CHECK(mey_mesh_vertex(mesh, 0, &x, &y, &bdry) == MEY_OK);
    CHECK(x == 0.0);
    CHECK(y == 0.0);
    CHECK(bdry == 0);
    CHECK(mey_mesh_vertex(mesh, 99, &x, &y, &bdry) == MEY_ERR_INVALID_ARGUMENT);

    int tri[3];
    CHECK(mey_mesh_triangle(mesh, 0, tri) == MEY_OK);
    CHECK(tri[0] == 0);

    mey_mesh* fine = nullptr;
    REQUIRE(mey_mesh_refine(mesh, &fine) == MEY_OK);
    CHECK(mey_mesh_num_triangles(fine) == 96);

    const std::string path = temp_path("mesh.txt");
    REQUIRE(mey_mesh_write(mesh, path.c_str()) == MEY_OK);
    std::ifstream in(path);
    int nv = 0, nt = 0;
    in >> nv >> nt;
    CHECK(nv == 17);
    CHECK(nt == 24);
    std::remove(path.c_str());

    mey_mesh_free(fine);
    mey_mesh_free(mesh);
}

TEST_CASE("mesh creation rejects bad parameters with messages") {
    mey_mesh* mesh = nullptr;
    CHECK(mey_mesh_create_disk(2, 10, 1.0, &mesh) == MEY_ERR_INVALID_ARGUMENT);
    CHECK(std::string(mey_last_error()).find("divisible") != std::string::npos);
    CHECK(mey_mesh_create_disk(2, 8, 1.0, nullptr) == MEY_ERR_INVALID_ARGUMENT);
}

TEST_CASE("field and oracle evaluators") {
    mey_field* field = nullptr;
    REQUIRE(mey_field_create_example(0.5, &field) == MEY_OK);
    CHECK(mey_field_lambda(field) == 1.0);

    double d = 1.0;
    CHECK(mey_field_eval_d(field, 1.0, 0.0, &d) == MEY_OK);
    CHECK(d == 0.0);
    CHECK(mey_field_eval_d(field, 0.0, 0.0, &d) == MEY_ERR_UNDEFINED_AT_ORIGIN);

    double a[4];
    CHECK(mey_field_eval_matrix(field, 0.0, 1.0, a) == MEY_OK);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(-3.0 * M_PI / 4.0));
    CHECK(a[2] == doctest::Approx(3.0 * M_PI / 4.0));
    mey_field_free(field);

    CHECK(mey_field_create_example(1.5, &field) == MEY_ERR_INVALID_ARGUMENT);

    double u, grad[2];
    REQUIRE(mey_oracle_eval(0.5, 1.0, 0.0, &u, grad) == MEY_OK);
    CHECK(u == 1.0);
    CHECK(grad[0] == doctest::Approx(0.5));
    CHECK(std::abs(grad[1]) <= 1e-15);
    CHECK(mey_oracle_eval(0.5, 0.0, 0.0, &u, grad) == MEY_ERR_UNDEFINED_AT_ORIGIN);

    // pi (1 - mu^2) / (2 mu) with mu = 1/2.
    CHECK(mey_example_d_sup(0.5) == doctest::Approx(0.75 * M_PI).epsilon(1e-12));
}

TEST_CASE("bmo estimator through the C surface") {
    mey_bmo_result result{};
    REQUIRE(mey_bmo_seminorm_example(0.5, 7, 3, 64, &result) == MEY_OK);
    CHECK(result.value > 0.0);
    CHECK(result.value <= 2.0 * mey_example_d_sup(0.5));
    CHECK(result.n_balls == 49 * 4);

    // Generic callback path: constants give exactly zero.
    const auto constant = [](double, double, void*) { return 1.0; };
    mey_bmo_result zero{};
    REQUIRE(mey_bmo_seminorm(constant, nullptr, 5, 2, 64, &zero) == MEY_OK);
    CHECK(zero.value == 0.0);

    CHECK(mey_bmo_seminorm_example(0.5, 7, 3, 64, nullptr) ==
          MEY_ERR_INVALID_ARGUMENT);
    CHECK(mey_bmo_seminorm_example(2.0, 7, 3, 64, &result) ==
          MEY_ERR_INVALID_ARGUMENT);
}

TEST_CASE("solve, evaluate, and write a solution") {
    mey_solve_opts opts;
    mey_solve_opts_defaults(&opts);
    opts.rings = 4;
    opts.sectors = 16;
    opts.bc = MEY_BC_ORACLE;
    opts.mu = 0.5;

    mey_solution* sol = nullptr;
    mey_solve_report report{};
    REQUIRE(mey_solve(&opts, &sol, &report) == MEY_OK);
    CHECK(report.converged == 1);
    CHECK(report.relative_residual <= opts.tol);
    CHECK(mey_solution_num_vertices(sol) == 1 + 4 * 16);

    double u = 0.0;
    CHECK(mey_solution_coeff(sol, 0, &u) == MEY_OK);
    CHECK(mey_solution_eval(sol, 0.3, 0.1, &u) == MEY_OK);
    CHECK(std::isfinite(u));
    CHECK(mey_solution_eval(sol, 5.0, 5.0, &u) == MEY_ERR_EMPTY_REGION);

    const mey_mesh* mesh_view = mey_solution_mesh(sol);
    CHECK(mey_mesh_num_vertices(mesh_view) == 65);

    const std::string path = temp_path("solution.csv");
    REQUIRE(mey_solution_write_csv(sol, path.c_str()) == MEY_OK);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,u");
    std::remove(path.c_str());

    mey_solution_free(sol);
}

TEST_CASE("solver failure surfaces as a status, not a crash") {
    mey_solve_opts opts;
    mey_solve_opts_defaults(&opts);
    opts.rings = 8;
    opts.sectors = 32;
    opts.bc = MEY_BC_ORACLE;
    opts.max_iter = 2;
    opts.tol = 1e-14;

    mey_solution* sol = nullptr;
    mey_solve_report report{};
    CHECK(mey_solve(&opts, &sol, &report) == MEY_ERR_NO_CONVERGENCE);
    CHECK(sol == nullptr);
}

TEST_CASE("analysis entry points") {
    double p_star = 0.0;
    REQUIRE(mey_threshold_lp(0.5, 2.0, 6.0, 0.1, &p_star) == MEY_OK);
    CHECK(std::abs(p_star - 4.0) <= 0.25);

    double alpha = 0.0;
    REQUIRE(mey_threshold_holder(0.75, &alpha) == MEY_OK);
    CHECK(std::abs(alpha - 0.75) <= 1e-6);

    double residuals[2] = {0, 0};
    REQUIRE(mey_verify_oracle(0.5, 2, 6, 24, 2.0, residuals) == MEY_OK);
    CHECK(residuals[1] < residuals[0]);

    const double radii[5] = {0.4, 0.2, 0.1, 0.05, 0.0025};
    const double values[5] = {2.0, 1.0, 0.5, 0.25, 0.0125};
    mey_fit_result fit{};
    REQUIRE(mey_fit_exponent(radii, values, 5, &fit) == MEY_OK);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mey_fit_exponent(radii, values, 3, &fit) == MEY_ERR_DEGENERATE_FIT);
}

TEST_CASE("degeneration scan through the C surface") {
    mey_scan_opts opts;
    mey_scan_opts_defaults(&opts);
    opts.rings = 10;
    opts.refine = 1;
    opts.p_min = 2.0;
    opts.p_max = 4.0;
    opts.p_step = 1.0;
    opts.n_balls = 6;

    int n_p = 0;
    REQUIRE(mey_scan_num_p(&opts, &n_p) == MEY_OK);
    CHECK(n_p == 3);

    std::vector<double> p(n_p), max_ratio(n_p), argmax(n_p);
    std::vector<double> ratios(static_cast<std::size_t>(n_p) * opts.n_balls);
    REQUIRE(mey_scan_meyers(&opts, p.data(), max_ratio.data(), argmax.data(),
                            ratios.data()) == MEY_OK);
    CHECK(p[2] == 4.0);
    CHECK(max_ratio[2] > max_ratio[0]);
    // The argmax ball shrinks toward the singular point.
    CHECK(argmax[2] <= 0.4 * std::pow(2.0, -4));
}

TEST_CASE("convergence drivers") {
    double errors[2];
    int iterations[2];
    REQUIRE(mey_convergence_manufactured(0.5, 2, 4, 16, errors, iterations) ==
            MEY_OK);
    CHECK(errors[1] < errors[0]);
    CHECK(iterations[0] > 0);

    REQUIRE(mey_convergence_oracle(0.5, 2, 6, 24, 2.0, errors, iterations) ==
            MEY_OK);
    CHECK(errors[1] < errors[0]);
}
