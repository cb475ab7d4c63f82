// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything numerical goes through the C API of the
// shared library; this file only parses flags and formats artifacts.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "meyerslab.h"
#include "run_config.hpp"

namespace {

using meyerslab::cli::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitRowFailures = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int fail_with_status(const RunConfig& config, mey_status status) {
    nlohmann::json err{
        {"code", mey_status_name(status)},
        {"message", mey_last_error()},
        {"context", config.command},
    };
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return (status == MEY_ERR_INVALID_ARGUMENT || status == MEY_ERR_IO)
               ? kExitValidation
               : kExitNumerical;
}

std::FILE* open_or_stdout(const std::string& path) {
    if (path.empty()) return stdout;
    std::FILE* f = std::fopen(path.c_str(), "w");
    return f;
}

void close_if_file(std::FILE* f) {
    if (f && f != stdout) std::fclose(f);
}

mey_solve_opts solve_opts_from(const RunConfig& config) {
    mey_solve_opts opts;
    mey_solve_opts_defaults(&opts);
    opts.field = config.field == "identity" ? MEY_FIELD_IDENTITY : MEY_FIELD_EXAMPLE;
    opts.mu = config.mu;
    opts.rings = config.rings;
    opts.sectors = config.sectors;
    opts.grading = config.grading;
    opts.refine = config.refine;
    opts.tol = config.tol;
    opts.quad_order = config.quad;
    if (config.rhs == "manufactured") {
        opts.rhs = MEY_RHS_MANUFACTURED;
    } else if (config.rhs != "zero") {
        opts.rhs = MEY_RHS_CONST;
        config.rhs_components(&opts.fx, &opts.fy);
    }
    opts.bc = config.bc == "oracle" ? MEY_BC_ORACLE : MEY_BC_ZERO;
    return opts;
}

int run_solve(const RunConfig& config) {
    const mey_solve_opts opts = solve_opts_from(config);
    mey_solution* sol = nullptr;
    mey_solve_report report{};
    const mey_status status = mey_solve(&opts, &sol, &report);
    if (status != MEY_OK) return fail_with_status(config, status);

    if (!config.out.empty()) {
        const mey_status ws = mey_solution_write_csv(sol, config.out.c_str());
        if (ws != MEY_OK) {
            mey_solution_free(sol);
            return fail_with_status(config, ws);
        }
    }
    if (!config.mesh_out.empty()) {
        const mey_status ws =
            mey_mesh_write(mey_solution_mesh(sol), config.mesh_out.c_str());
        if (ws != MEY_OK) {
            mey_solution_free(sol);
            return fail_with_status(config, ws);
        }
    }
    std::printf("solved: %d vertices, %d iterations, relative residual %.3e\n",
                mey_solution_num_vertices(sol), report.iterations,
                report.relative_residual);
    mey_solution_free(sol);
    return kExitOk;
}

int run_bmo(const RunConfig& config) {
    mey_bmo_result result{};
    const mey_status status = mey_bmo_seminorm_example(
        config.mu, config.grid_n, config.radii_min_exp, config.bmo_quad, &result);
    if (status != MEY_OK) return fail_with_status(config, status);

    if (config.json_output) {
        nlohmann::json j{
            {"value", result.value},
            {"argmax_center", {result.argmax_center_x, result.argmax_center_y}},
            {"argmax_radius", result.argmax_radius},
            {"n_balls", result.n_balls},
        };
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("bmo lower bound %.12g at center (%.6g, %.6g), radius %.6g "
                    "(%d balls)\n",
                    result.value, result.argmax_center_x, result.argmax_center_y,
                    result.argmax_radius, result.n_balls);
    }
    return kExitOk;
}

int run_threshold(const RunConfig& config) {
    if (config.mode == "lp") {
        const double target = 2.0 / (1.0 - config.mu);
        double p_star = 0.0;
        const mey_status status =
            mey_threshold_lp(config.mu, 2.0, target + 2.0, 0.1, &p_star);
        if (status != MEY_OK) return fail_with_status(config, status);
        if (config.json_output) {
            nlohmann::json j{{"mode", "lp"},
                             {"mu", config.mu},
                             {"p_star", p_star},
                             {"target", target}};
            std::printf("%s\n", j.dump(2).c_str());
        } else {
            std::printf("lp threshold p* = %.6g (target 2/(1-mu) = %.6g)\n", p_star,
                        target);
        }
        return kExitOk;
    }

    double alpha = 0.0;
    const mey_status status = mey_threshold_holder(config.mu, &alpha);
    if (status != MEY_OK) return fail_with_status(config, status);
    if (config.json_output) {
        nlohmann::json j{{"mode", "holder"},
                         {"mu", config.mu},
                         {"alpha_star", alpha},
                         {"target", config.mu}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("holder exponent alpha* = %.12g (target mu = %.6g)\n", alpha,
                    config.mu);
    }
    return kExitOk;
}

int run_scan_meyers(const RunConfig& config) {
    mey_scan_opts opts;
    mey_scan_opts_defaults(&opts);
    opts.field = config.field == "identity" ? MEY_FIELD_IDENTITY : MEY_FIELD_EXAMPLE;
    opts.mu = config.mu;
    opts.refine = config.refine;
    opts.p_min = config.p_min;
    opts.p_max = config.p_max;
    opts.p_step = config.p_step;

    int n_p = 0;
    mey_status status = mey_scan_num_p(&opts, &n_p);
    if (status != MEY_OK) return fail_with_status(config, status);

    std::vector<double> p(n_p), max_ratio(n_p), argmax_radius(n_p);
    status = mey_scan_meyers(&opts, p.data(), max_ratio.data(),
                             argmax_radius.data(), nullptr);
    if (status != MEY_OK) return fail_with_status(config, status);

    std::FILE* f = open_or_stdout(config.csv);
    if (!f) {
        std::fprintf(stderr, "cannot open '%s'\n", config.csv.c_str());
        return kExitValidation;
    }
    std::fprintf(f, "p,max_ratio,argmax_center_x,argmax_center_y,argmax_radius\n");
    for (int i = 0; i < n_p; ++i)
        std::fprintf(f, "%.17g,%.17g,0,0,%.17g\n", p[i], max_ratio[i],
                     argmax_radius[i]);
    close_if_file(f);
    return kExitOk;
}

int run_convergence(const RunConfig& config) {
    std::vector<double> errors(config.levels);
    std::vector<int> iterations(config.levels);
    mey_status status;
    if (config.case_name == "manufactured") {
        status = mey_convergence_manufactured(config.mu, config.levels, config.rings,
                                              config.sectors, errors.data(),
                                              iterations.data());
    } else {
        const double grading = config.grading < 2.0 ? 2.0 : config.grading;
        status = mey_convergence_oracle(config.mu, config.levels, config.rings,
                                        config.sectors, grading, errors.data(),
                                        iterations.data());
    }
    if (status != MEY_OK) return fail_with_status(config, status);

    std::FILE* f = open_or_stdout(config.csv);
    if (!f) {
        std::fprintf(stderr, "cannot open '%s'\n", config.csv.c_str());
        return kExitValidation;
    }
    std::fprintf(f, "level,error,rate,iterations\n");
    for (int k = 0; k < config.levels; ++k) {
        if (k == 0)
            std::fprintf(f, "%d,%.17g,,%d\n", k, errors[k], iterations[k]);
        else
            std::fprintf(f, "%d,%.17g,%.6g,%d\n", k, errors[k],
                         std::log2(errors[k - 1] / errors[k]), iterations[k]);
    }
    close_if_file(f);
    return kExitOk;
}

int run_verify_oracle(const RunConfig& config) {
    std::vector<double> residuals(config.levels);
    const mey_status status =
        mey_verify_oracle(config.mu, config.levels, config.rings, config.sectors,
                          config.grading, residuals.data());
    if (status != MEY_OK) return fail_with_status(config, status);

    std::FILE* f = open_or_stdout(config.csv);
    if (!f) {
        std::fprintf(stderr, "cannot open '%s'\n", config.csv.c_str());
        return kExitValidation;
    }
    std::fprintf(f, "level,max_weak_residual\n");
    for (int k = 0; k < config.levels; ++k)
        std::fprintf(f, "%d,%.17g\n", k, residuals[k]);
    close_if_file(f);
    return kExitOk;
}

int run_reproduce(const RunConfig& config) {
    int n_failed = 0;
    const mey_status status =
        mey_reproduce(config.out_dir.c_str(), config.seed, &n_failed);
    if (status != MEY_OK) return fail_with_status(config, status);
    std::printf("report written to %s/report.md (%d failing rows)\n",
                config.out_dir.c_str(), n_failed);
    return n_failed == 0 ? kExitOk : kExitRowFailures;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D finite-element laboratory for nonsymmetric elliptic "
                 "operators with a skew-symmetric BMO part"};
    app.require_subcommand(1);

    RunConfig config;

    auto add_mesh_flags = [&](CLI::App* cmd) {
        cmd->add_option("--rings", config.rings, "radial rings of the base mesh");
        cmd->add_option("--sectors", config.sectors,
                        "angular sectors (divisible by 4)");
        cmd->add_option("--grading", config.grading,
                        "radial grading exponent (>= 1)");
        cmd->add_option("--refine", config.refine, "uniform refinement levels");
    };
    auto add_mu = [&](CLI::App* cmd) {
        return cmd->add_option("--mu", config.mu, "example-family parameter in (0,1)");
    };

    CLI::App* solve = app.add_subcommand("solve", "assemble and solve one problem");
    auto* solve_mu = add_mu(solve);
    solve->add_option("--field", config.field, "identity or example");
    add_mesh_flags(solve);
    solve->add_option("--rhs", config.rhs, "zero | const:<fx>,<fy> | manufactured");
    solve->add_option("--bc", config.bc, "zero | oracle");
    solve->add_option("--tol", config.tol, "GMRES relative tolerance");
    solve->add_option("--quad", config.quad, "triangle quadrature points (1, 3, 6)");
    solve->add_option("--out", config.out, "solution CSV path");
    solve->add_option("--mesh-out", config.mesh_out, "mesh ASCII path");

    CLI::App* bmo = app.add_subcommand("bmo", "BMO seminorm lower bound of the "
                                              "example skew field");
    auto* bmo_mu = add_mu(bmo);
    bmo->add_option("--grid", config.grid_n, "center grid size");
    bmo->add_option("--radii-min-exp", config.radii_min_exp,
                    "radii span 2^0 .. 2^-k");
    bmo->add_option("--quad", config.bmo_quad, "polar quadrature order per ball");
    bmo->add_flag("--json", config.json_output, "machine-readable output");

    CLI::App* threshold =
        app.add_subcommand("threshold", "integrability or Holder threshold of "
                                        "the singular solution");
    auto* threshold_mu = add_mu(threshold);
    threshold->add_option("--mode", config.mode, "lp | holder");
    threshold->add_flag("--json", config.json_output, "machine-readable output");

    CLI::App* scan = app.add_subcommand("scan-meyers",
                                        "degeneration scan of the reverse "
                                        "Holder quotient over shrinking balls");
    auto* scan_mu = add_mu(scan);
    scan->add_option("--field", config.field, "identity (control) or example");
    scan->add_option("--p-min", config.p_min, "smallest exponent");
    scan->add_option("--p-max", config.p_max, "largest exponent");
    scan->add_option("--p-step", config.p_step, "exponent step");
    scan->add_option("--refine", config.refine, "extra refinement levels");
    scan->add_option("--csv", config.csv, "output CSV path (default stdout)");

    CLI::App* convergence =
        app.add_subcommand("convergence", "error decay across refinement levels");
    convergence->add_option("--case", config.case_name, "manufactured | oracle");
    add_mu(convergence);
    convergence->add_option("--levels", config.levels, "refinement levels");
    add_mesh_flags(convergence);
    convergence->add_option("--csv", config.csv, "output CSV path (default stdout)");

    CLI::App* verify = app.add_subcommand(
        "verify-oracle", "weak-residual decay of the exact singular solution");
    auto* verify_mu = add_mu(verify);
    verify->add_option("--levels", config.levels, "refinement levels");
    add_mesh_flags(verify);
    verify->add_option("--csv", config.csv, "output CSV path (default stdout)");

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "run the full verification matrix and write a report");
    reproduce->add_option("--out-dir", config.out_dir, "output directory");

    app.add_option("--seed", config.seed, "seed echoed into artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.mu_given = (solve_mu->count() > 0) || (bmo_mu->count() > 0) ||
                      (threshold_mu->count() > 0) || (scan_mu->count() > 0) ||
                      (verify_mu->count() > 0);

    const std::vector<std::string> problems = config.validate();
    if (!problems.empty()) {
        for (const std::string& p : problems)
            std::fprintf(stderr, "error: %s\n", p.c_str());
        return kExitValidation;
    }

    if (config.command == "solve") return run_solve(config);
    if (config.command == "bmo") return run_bmo(config);
    if (config.command == "threshold") return run_threshold(config);
    if (config.command == "scan-meyers") return run_scan_meyers(config);
    if (config.command == "convergence") return run_convergence(config);
    if (config.command == "verify-oracle") return run_verify_oracle(config);
    if (config.command == "reproduce") return run_reproduce(config);
    return kExitValidation;
}
