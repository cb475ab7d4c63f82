// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "meyerslab.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "coeff.hpp"
#include "error.hpp"
#include "fem.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "reproduce.hpp"

using namespace meyerslab;

struct mey_mesh {
    std::shared_ptr<const Mesh> impl;
};

struct mey_field {
    std::shared_ptr<const CoefficientField> impl;
};

struct mey_solution {
    std::shared_ptr<const FemSolution> impl;
};

namespace {

thread_local std::string g_last_error;

mey_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return MEY_ERR_INVALID_ARGUMENT;
        case ErrorCode::undefined_at_origin: return MEY_ERR_UNDEFINED_AT_ORIGIN;
        case ErrorCode::degenerate_element: return MEY_ERR_DEGENERATE_ELEMENT;
        case ErrorCode::coefficient_undefined: return MEY_ERR_COEFFICIENT_UNDEFINED;
        case ErrorCode::evaluation_failure: return MEY_ERR_EVALUATION_FAILURE;
        case ErrorCode::no_convergence: return MEY_ERR_NO_CONVERGENCE;
        case ErrorCode::breakdown: return MEY_ERR_BREAKDOWN;
        case ErrorCode::empty_region: return MEY_ERR_EMPTY_REGION;
        case ErrorCode::degenerate_fit: return MEY_ERR_DEGENERATE_FIT;
        case ErrorCode::region_too_small: return MEY_ERR_REGION_TOO_SMALL;
        case ErrorCode::zero_rhs: return MEY_ERR_ZERO_RHS;
        case ErrorCode::io_failure: return MEY_ERR_IO;
        case ErrorCode::internal: return MEY_ERR_INTERNAL;
    }
    return MEY_ERR_INTERNAL;
}

template <typename Fn>
mey_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MEY_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MEY_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MEY_ERR_INTERNAL;
    }
}

mey_status invalid(const char* what) {
    g_last_error = what;
    return MEY_ERR_INVALID_ARGUMENT;
}

std::shared_ptr<const Mesh> build_mesh(int rings, int sectors, double grading,
                                       int refine) {
    require(refine >= 0 && refine <= 10, ErrorCode::invalid_argument,
            "refine must lie in [0, 10]");
    Mesh mesh = Mesh::build_disk(rings, sectors, grading);
    for (int i = 0; i < refine; ++i) mesh = mesh.refine();
    return std::make_shared<const Mesh>(std::move(mesh));
}

std::shared_ptr<const CoefficientField> build_field(mey_field_kind kind, double mu) {
    if (kind == MEY_FIELD_IDENTITY)
        return std::make_shared<const CoefficientField>(CoefficientField::identity());
    return std::make_shared<const CoefficientField>(CoefficientField::example(mu));
}

VectorField manufactured_rhs(std::shared_ptr<const CoefficientField> field) {
    return [field](double x, double y) {
        const Vec2 grad{-2.0 * x, -2.0 * y};
        return field->eval_matrix(x, y).apply(grad);
    };
}

BoundaryData oracle_bc(mey_field_kind kind, double mu) {
    if (kind == MEY_FIELD_IDENTITY) {
        // The singular solution restricted to the unit circle is just x.
        return [](double x, double) { return x; };
    }
    const OracleSolution oracle(mu);
    return [oracle](double x, double y) { return oracle.value(x, y); };
}

} // namespace

extern "C" {

const char* mey_status_name(mey_status status) {
    switch (status) {
        case MEY_OK: return "ok";
        case MEY_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case MEY_ERR_UNDEFINED_AT_ORIGIN: return "undefined-at-origin";
        case MEY_ERR_DEGENERATE_ELEMENT: return "degenerate-element";
        case MEY_ERR_COEFFICIENT_UNDEFINED: return "coefficient-undefined";
        case MEY_ERR_EVALUATION_FAILURE: return "evaluation-failure";
        case MEY_ERR_NO_CONVERGENCE: return "no-convergence";
        case MEY_ERR_BREAKDOWN: return "breakdown";
        case MEY_ERR_EMPTY_REGION: return "empty-region";
        case MEY_ERR_DEGENERATE_FIT: return "degenerate-fit";
        case MEY_ERR_REGION_TOO_SMALL: return "region-too-small";
        case MEY_ERR_ZERO_RHS: return "zero-rhs";
        case MEY_ERR_IO: return "io-failure";
        case MEY_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* mey_last_error(void) { return g_last_error.c_str(); }

const char* mey_version(void) { return "1.0.0"; }

mey_status mey_mesh_create_disk(int n_rings, int n_sectors, double grading,
                                mey_mesh** out) {
    if (!out) return invalid("null output pointer");
    return guarded([&] {
        auto mesh = std::make_shared<const Mesh>(
            Mesh::build_disk(n_rings, n_sectors, grading));
        *out = new mey_mesh{std::move(mesh)};
    });
}

mey_status mey_mesh_create_annulus(double inner_radius, int n_rings, int n_sectors,
                                   double grading, mey_mesh** out) {
    if (!out) return invalid("null output pointer");
    return guarded([&] {
        auto mesh = std::make_shared<const Mesh>(
            Mesh::build_annulus(inner_radius, n_rings, n_sectors, grading));
        *out = new mey_mesh{std::move(mesh)};
    });
}

mey_status mey_mesh_create_square(int n_cells, mey_mesh** out) {
    if (!out) return invalid("null output pointer");
    return guarded([&] {
        auto mesh = std::make_shared<const Mesh>(Mesh::build_square(n_cells));
        *out = new mey_mesh{std::move(mesh)};
    });
}

mey_status mey_mesh_refine(const mey_mesh* mesh, mey_mesh** out) {
    if (!mesh || !out) return invalid("null mesh or output pointer");
    return guarded([&] {
        auto refined = std::make_shared<const Mesh>(mesh->impl->refine());
        *out = new mey_mesh{std::move(refined)};
    });
}

void mey_mesh_free(mey_mesh* mesh) { delete mesh; }

int mey_mesh_num_vertices(const mey_mesh* mesh) {
    return mesh ? mesh->impl->num_vertices() : 0;
}

int mey_mesh_num_triangles(const mey_mesh* mesh) {
    return mesh ? mesh->impl->num_triangles() : 0;
}

mey_status mey_mesh_vertex(const mey_mesh* mesh, int i, double* x, double* y,
                           int* on_boundary) {
    if (!mesh || !x || !y || !on_boundary) return invalid("null argument");
    if (i < 0 || i >= mesh->impl->num_vertices())
        return invalid("vertex index out of range");
    const Vertex& v = mesh->impl->vertex(i);
    *x = v.x;
    *y = v.y;
    *on_boundary = v.on_boundary ? 1 : 0;
    return MEY_OK;
}

mey_status mey_mesh_triangle(const mey_mesh* mesh, int t, int v[3]) {
    if (!mesh || !v) return invalid("null argument");
    if (t < 0 || t >= mesh->impl->num_triangles())
        return invalid("triangle index out of range");
    const Triangle& tri = mesh->impl->triangle(t);
    v[0] = tri.v[0];
    v[1] = tri.v[1];
    v[2] = tri.v[2];
    return MEY_OK;
}

mey_status mey_mesh_check(const mey_mesh* mesh) {
    if (!mesh) return invalid("null mesh");
    return guarded([&] { mesh->impl->validate(); });
}

mey_status mey_mesh_write(const mey_mesh* mesh, const char* path) {
    if (!mesh || !path) return invalid("null argument");
    return guarded([&] { mesh->impl->write(path); });
}

mey_status mey_field_create_identity(mey_field** out) {
    if (!out) return invalid("null output pointer");
    return guarded([&] {
        *out = new mey_field{std::make_shared<const CoefficientField>(
            CoefficientField::identity())};
    });
}

mey_status mey_field_create_example(double mu, mey_field** out) {
    if (!out) return invalid("null output pointer");
    return guarded([&] {
        *out = new mey_field{std::make_shared<const CoefficientField>(
            CoefficientField::example(mu))};
    });
}

void mey_field_free(mey_field* field) { delete field; }

double mey_field_lambda(const mey_field* field) {
    return field ? field->impl->lambda() : 0.0;
}

mey_status mey_field_eval_d(const mey_field* field, double x, double y, double* d) {
    if (!field || !d) return invalid("null argument");
    return guarded([&] { *d = field->impl->eval_d(x, y); });
}

mey_status mey_field_eval_matrix(const mey_field* field, double x, double y,
                                 double a[4]) {
    if (!field || !a) return invalid("null argument");
    return guarded([&] {
        const Mat2 m = field->impl->eval_matrix(x, y);
        a[0] = m.a11;
        a[1] = m.a12;
        a[2] = m.a21;
        a[3] = m.a22;
    });
}

mey_status mey_example_d(double x, double y, double mu, double* d) {
    if (!d) return invalid("null output pointer");
    return guarded([&] { *d = example_d(x, y, mu); });
}

double mey_example_d_sup(double mu) { return example_d_sup(mu); }

mey_status mey_oracle_eval(double mu, double x, double y, double* u, double grad[2]) {
    if (!u) return invalid("null output pointer");
    return guarded([&] {
        const OracleSolution oracle(mu);
        *u = oracle.value(x, y);
        if (grad) {
            const Vec2 g = oracle.gradient(x, y);
            grad[0] = g.x;
            grad[1] = g.y;
        }
    });
}

mey_status mey_bmo_seminorm(mey_scalar_fn field, void* ctx, int grid_n,
                            int radii_min_exp, int quad_n, mey_bmo_result* out) {
    if (!field || !out) return invalid("null argument");
    return guarded([&] {
        const BmoEstimate est = bmo_seminorm_default(
            [field, ctx](double x, double y) { return field(x, y, ctx); }, grid_n,
            radii_min_exp, quad_n);
        out->value = est.value;
        out->argmax_center_x = est.argmax_center.x;
        out->argmax_center_y = est.argmax_center.y;
        out->argmax_radius = est.argmax_radius;
        out->n_balls = est.n_centers * est.n_scales;
    });
}

mey_status mey_bmo_seminorm_example(double mu, int grid_n, int radii_min_exp,
                                    int quad_n, mey_bmo_result* out) {
    if (!out) return invalid("null output pointer");
    return guarded([&] {
        require(mu > 0.0 && mu < 1.0, ErrorCode::invalid_argument,
                "mu must lie in (0,1)");
        const BmoEstimate est = bmo_seminorm_default(
            [mu](double x, double y) {
                if (x == 0.0 && y == 0.0)
                    return std::numeric_limits<double>::quiet_NaN();
                return example_d(x, y, mu);
            },
            grid_n, radii_min_exp, quad_n);
        out->value = est.value;
        out->argmax_center_x = est.argmax_center.x;
        out->argmax_center_y = est.argmax_center.y;
        out->argmax_radius = est.argmax_radius;
        out->n_balls = est.n_centers * est.n_scales;
    });
}

void mey_solve_opts_defaults(mey_solve_opts* opts) {
    if (!opts) return;
    opts->field = MEY_FIELD_EXAMPLE;
    opts->mu = 0.5;
    opts->rings = 8;
    opts->sectors = 32;
    opts->grading = 1.0;
    opts->refine = 0;
    opts->rhs = MEY_RHS_ZERO;
    opts->fx = 0.0;
    opts->fy = 0.0;
    opts->bc = MEY_BC_ZERO;
    opts->tol = 1e-10;
    opts->quad_order = 3;
    opts->restart = 50;
    opts->max_iter = 2000;
    opts->use_jacobi = 1;
}

mey_status mey_solve(const mey_solve_opts* opts, mey_solution** out,
                     mey_solve_report* report) {
    if (!opts || !out) return invalid("null argument");
    return guarded([&] {
        auto mesh = build_mesh(opts->rings, opts->sectors, opts->grading,
                               opts->refine);
        auto field = build_field(opts->field, opts->mu);

        VectorField F;
        switch (opts->rhs) {
            case MEY_RHS_ZERO: break;
            case MEY_RHS_CONST: {
                const Vec2 c{opts->fx, opts->fy};
                F = [c](double, double) { return c; };
                break;
            }
            case MEY_RHS_MANUFACTURED:
                F = manufactured_rhs(field);
                break;
        }

        BoundaryData g;
        if (opts->bc == MEY_BC_ORACLE) g = oracle_bc(opts->field, opts->mu);

        SolveOptions solve_opts;
        solve_opts.quad_order = opts->quad_order;
        solve_opts.tol = opts->tol;
        solve_opts.restart = opts->restart;
        solve_opts.max_iter = opts->max_iter;
        solve_opts.precond =
            opts->use_jacobi ? Preconditioner::jacobi : Preconditioner::none;

        LinearSolveReport rep;
        FemSolution sol = solve_problem(std::move(mesh), std::move(field), F, g,
                                        solve_opts, rep);
        if (report) {
            report->iterations = rep.iterations;
            report->relative_residual = rep.relative_residual;
            report->converged = rep.converged ? 1 : 0;
        }
        *out = new mey_solution{std::make_shared<const FemSolution>(std::move(sol))};
    });
}

void mey_solution_free(mey_solution* sol) { delete sol; }

int mey_solution_num_vertices(const mey_solution* sol) {
    return sol ? sol->impl->mesh().num_vertices() : 0;
}

mey_status mey_solution_coeff(const mey_solution* sol, int i, double* u) {
    if (!sol || !u) return invalid("null argument");
    if (i < 0 || i >= sol->impl->mesh().num_vertices())
        return invalid("vertex index out of range");
    *u = sol->impl->coeffs()[i];
    return MEY_OK;
}

mey_status mey_solution_eval(const mey_solution* sol, double x, double y,
                             double* u) {
    if (!sol || !u) return invalid("null argument");
    return guarded([&] { *u = sol->impl->value_at({x, y}); });
}

const mey_mesh* mey_solution_mesh(const mey_solution* sol) {
    if (!sol) return nullptr;
    thread_local mey_mesh view;
    view.impl = sol->impl->mesh_ptr();
    return &view;
}

mey_status mey_solution_write_csv(const mey_solution* sol, const char* path) {
    if (!sol || !path) return invalid("null argument");
    return guarded([&] { sol->impl->write_csv(path); });
}

mey_status mey_verify_oracle(double mu, int levels, int rings, int sectors,
                             double grading, double* max_residuals) {
    if (!max_residuals) return invalid("null output pointer");
    return guarded([&] {
        require(levels >= 1 && levels <= 8, ErrorCode::invalid_argument,
                "levels must lie in [1, 8]");
        const CoefficientField field = CoefficientField::example(mu);
        const OracleSolution oracle(mu);
        Mesh mesh = Mesh::build_disk(rings, sectors, grading);
        for (int level = 0; level < levels; ++level) {
            if (level > 0) mesh = mesh.refine();
            const std::vector<double> r = weak_residual(
                mesh, field,
                [&](double x, double y) { return oracle.gradient(x, y); }, 3);
            double max_abs = 0.0;
            for (double v : r) max_abs = std::max(max_abs, std::abs(v));
            max_residuals[level] = max_abs;
        }
    });
}

mey_status mey_fit_exponent(const double* radii, const double* values, int n,
                            mey_fit_result* out) {
    if (!radii || !values || !out) return invalid("null argument");
    return guarded([&] {
        require(n >= 0, ErrorCode::invalid_argument, "negative length");
        const std::vector<double> r(radii, radii + n);
        const std::vector<double> v(values, values + n);
        const ExponentFit fit = fit_exponent(r, v);
        out->slope = fit.slope;
        out->intercept = fit.intercept;
        out->r2 = fit.r2;
        out->n_points = fit.n_points;
    });
}

mey_status mey_threshold_lp(double mu, double p_min, double p_max, double p_step,
                            double* p_star) {
    if (!p_star) return invalid("null output pointer");
    return guarded([&] {
        const auto grid = default_p_grid(p_min, p_max, p_step);
        const auto radii = default_dyadic_radii(0.4, 9);
        const ThresholdScan scan =
            integrability_threshold(GradientSource::oracle(mu), grid, radii, 3);
        *p_star = scan.p_star;
    });
}

mey_status mey_threshold_holder(double mu, double* alpha) {
    if (!alpha) return invalid("null output pointer");
    return guarded([&] {
        const OracleSolution oracle(mu);
        std::vector<double> scales;
        for (int k = 2; k <= 13; ++k) scales.push_back(std::pow(2.0, -k));
        const HolderEstimate est = holder_exponent(
            [&](double x, double y) { return oracle.value(x, y); }, 0.0, scales,
            64);
        *alpha = est.alpha;
    });
}

mey_status mey_threshold_holder_fem(const mey_solution* sol, double mu,
                                    double* alpha) {
    if (!sol || !alpha) return invalid("null argument");
    (void)mu;
    return guarded([&] {
        std::vector<double> scales;
        for (int k = 2; k <= 9; ++k) scales.push_back(std::pow(2.0, -k));
        const double u0 = sol->impl->value_at({0.0, 0.0});
        const HolderEstimate est = holder_exponent(
            [&](double x, double y) { return sol->impl->value_at({x, y}); }, u0,
            scales, 128);
        *alpha = est.alpha;
    });
}

void mey_scan_opts_defaults(mey_scan_opts* opts) {
    if (!opts) return;
    opts->field = MEY_FIELD_EXAMPLE;
    opts->mu = 0.5;
    opts->rings = 20;
    opts->sectors = 32;
    opts->grading = 2.0;
    opts->refine = 2;
    opts->p_min = 2.0;
    opts->p_max = 8.0;
    opts->p_step = 0.25;
    opts->ball_r_max = 0.4;
    opts->n_balls = 9;
}

mey_status mey_scan_num_p(const mey_scan_opts* opts, int* n_p) {
    if (!opts || !n_p) return invalid("null argument");
    return guarded([&] {
        *n_p = static_cast<int>(
            default_p_grid(opts->p_min, opts->p_max, opts->p_step).size());
    });
}

mey_status mey_scan_meyers(const mey_scan_opts* opts, double* p_values,
                           double* max_ratio, double* argmax_radius,
                           double* ratios) {
    if (!opts || !p_values || !max_ratio || !argmax_radius)
        return invalid("null argument");
    return guarded([&] {
        auto mesh = build_mesh(opts->rings, opts->sectors, opts->grading,
                               opts->refine);
        auto field = build_field(opts->field, opts->mu);

        SolveOptions solve_opts;
        solve_opts.tol = 1e-10;
        solve_opts.max_iter = 8000;
        LinearSolveReport rep;
        const FemSolution sol =
            solve_problem(std::move(mesh), field,
                          nullptr, oracle_bc(opts->field, opts->mu), solve_opts, rep);

        const WeightedSamples samples = samples_from_fem(sol, nullptr, 3);
        const auto radii = default_dyadic_radii(opts->ball_r_max, opts->n_balls);
        const std::vector<Vec2> centers(radii.size(), Vec2{0.0, 0.0});
        const auto grid = default_p_grid(opts->p_min, opts->p_max, opts->p_step);
        const RHScanResult scan = reverse_holder_scan(samples, centers, radii, grid);

        for (std::size_t i = 0; i < grid.size(); ++i) {
            p_values[i] = scan.p_grid[i];
            max_ratio[i] = scan.max_ratio[i];
            argmax_radius[i] = scan.radii[scan.argmax_ball[i]];
            if (ratios)
                for (std::size_t b = 0; b < radii.size(); ++b)
                    ratios[i * radii.size() + b] = scan.ratios[i][b];
        }
    });
}

mey_status mey_convergence_manufactured(double mu, int levels, int rings,
                                        int sectors, double* h1_errors,
                                        int* iterations) {
    if (!h1_errors) return invalid("null output pointer");
    return guarded([&] {
        require(levels >= 1 && levels <= 6, ErrorCode::invalid_argument,
                "levels must lie in [1, 6]");
        auto field = std::make_shared<const CoefficientField>(
            CoefficientField::example(mu));
        for (int level = 0; level < levels; ++level) {
            auto mesh = build_mesh(rings, sectors, 1.0, level);
            SolveOptions solve_opts;
            LinearSolveReport rep;
            const FemSolution sol = solve_problem(
                mesh, field, manufactured_rhs(field), nullptr, solve_opts, rep);

            double err2 = 0.0, ref2 = 0.0;
            for (int t = 0; t < mesh->num_triangles(); ++t) {
                const ElementGeometry geom = mesh->element_geometry(t);
                const Triangle& tri = mesh->triangle(t);
                const Vec2 p0 = mesh->vertex(tri.v[0]).pos();
                const Vec2 p1 = mesh->vertex(tri.v[1]).pos();
                const Vec2 p2 = mesh->vertex(tri.v[2]).pos();
                const Vec2 gh = sol.element_gradient(t);
                for (const TriQuadNode& q : triangle_rule(6)) {
                    const Vec2 xq = barycentric_point(q, p0, p1, p2);
                    const Vec2 gstar{-2.0 * xq.x, -2.0 * xq.y};
                    err2 += q.w * geom.area * (gh - gstar).norm2();
                    ref2 += q.w * geom.area * gstar.norm2();
                }
            }
            h1_errors[level] = std::sqrt(err2 / ref2);
            if (iterations) iterations[level] = rep.iterations;
        }
    });
}

mey_status mey_convergence_oracle(double mu, int levels, int rings, int sectors,
                                  double grading, double* l2_errors,
                                  int* iterations) {
    if (!l2_errors) return invalid("null output pointer");
    return guarded([&] {
        require(levels >= 1 && levels <= 6, ErrorCode::invalid_argument,
                "levels must lie in [1, 6]");
        auto field = std::make_shared<const CoefficientField>(
            CoefficientField::example(mu));
        const OracleSolution oracle(mu);
        for (int level = 0; level < levels; ++level) {
            auto mesh = build_mesh(rings, sectors, grading, level);
            SolveOptions solve_opts;
            solve_opts.max_iter = 8000;
            LinearSolveReport rep;
            const FemSolution sol = solve_problem(
                mesh, field, nullptr,
                [&](double x, double y) { return oracle.value(x, y); }, solve_opts,
                rep);

            double err2 = 0.0, ref2 = 0.0;
            for (int t = 0; t < mesh->num_triangles(); ++t) {
                const ElementGeometry geom = mesh->element_geometry(t);
                const Triangle& tri = mesh->triangle(t);
                const Vec2 p0 = mesh->vertex(tri.v[0]).pos();
                const Vec2 p1 = mesh->vertex(tri.v[1]).pos();
                const Vec2 p2 = mesh->vertex(tri.v[2]).pos();
                for (const TriQuadNode& q : triangle_rule(6)) {
                    const Vec2 xq = barycentric_point(q, p0, p1, p2);
                    const double uh = q.l0 * sol.coeffs()[tri.v[0]] +
                                      q.l1 * sol.coeffs()[tri.v[1]] +
                                      q.l2 * sol.coeffs()[tri.v[2]];
                    const double ustar = oracle.value(xq.x, xq.y);
                    err2 += q.w * geom.area * (uh - ustar) * (uh - ustar);
                    ref2 += q.w * geom.area * ustar * ustar;
                }
            }
            l2_errors[level] = std::sqrt(err2 / ref2);
            if (iterations) iterations[level] = rep.iterations;
        }
    });
}

mey_status mey_reproduce(const char* out_dir, uint64_t seed, int* n_failed) {
    if (!out_dir) return invalid("null output directory");
    return guarded([&] {
        const ReproduceReport report = reproduce_paper(out_dir, seed);
        if (n_failed) {
            int failed = 0;
            for (const ReproduceRow& row : report.rows)
                if (!row.pass) ++failed;
            *n_failed = failed;
        }
    });
}

} // extern "C"
