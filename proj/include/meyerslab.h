/* Copyright (c) the meyerslab authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the meyerslab shared library: a 2D P1 finite-element
 * laboratory for nonsymmetric elliptic operators div[(a + d) grad u] whose
 * skew part d is a bounded rotating field with a jump across the y-axis.
 * All objects are opaque handles; every fallible call returns mey_status and
 * mey_last_error() describes the most recent failure on the calling thread.
 */

#ifndef MEYERSLAB_H
#define MEYERSLAB_H

#include <stdint.h>

#if defined(_WIN32)
#define MEY_API __declspec(dllexport)
#else
#define MEY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mey_status {
    MEY_OK = 0,
    MEY_ERR_INVALID_ARGUMENT = 1,
    MEY_ERR_UNDEFINED_AT_ORIGIN = 2,
    MEY_ERR_DEGENERATE_ELEMENT = 3,
    MEY_ERR_COEFFICIENT_UNDEFINED = 4,
    MEY_ERR_EVALUATION_FAILURE = 5,
    MEY_ERR_NO_CONVERGENCE = 6,
    MEY_ERR_BREAKDOWN = 7,
    MEY_ERR_EMPTY_REGION = 8,
    MEY_ERR_DEGENERATE_FIT = 9,
    MEY_ERR_REGION_TOO_SMALL = 10,
    MEY_ERR_ZERO_RHS = 11,
    MEY_ERR_IO = 12,
    MEY_ERR_INTERNAL = 13
} mey_status;

MEY_API const char* mey_status_name(mey_status status);
/* Message for the last failing call on this thread ("" if none). */
MEY_API const char* mey_last_error(void);
MEY_API const char* mey_version(void);

/* ---- meshes ---- */

typedef struct mey_mesh mey_mesh;

MEY_API mey_status mey_mesh_create_disk(int n_rings, int n_sectors,
                                        double grading, mey_mesh** out);
MEY_API mey_status mey_mesh_create_annulus(double inner_radius, int n_rings,
                                           int n_sectors, double grading,
                                           mey_mesh** out);
MEY_API mey_status mey_mesh_create_square(int n_cells, mey_mesh** out);
MEY_API mey_status mey_mesh_refine(const mey_mesh* mesh, mey_mesh** out);
MEY_API void mey_mesh_free(mey_mesh* mesh);

MEY_API int mey_mesh_num_vertices(const mey_mesh* mesh);
MEY_API int mey_mesh_num_triangles(const mey_mesh* mesh);
MEY_API mey_status mey_mesh_vertex(const mey_mesh* mesh, int i, double* x,
                                   double* y, int* on_boundary);
MEY_API mey_status mey_mesh_triangle(const mey_mesh* mesh, int t, int v[3]);
/* Validates every mesh invariant (conformity, orientation, axis alignment,
 * boundary flags, area tiling). */
MEY_API mey_status mey_mesh_check(const mey_mesh* mesh);
/* ASCII format: "nv nt", one "x y flag" line per vertex, one "i j k" line
 * per triangle. */
MEY_API mey_status mey_mesh_write(const mey_mesh* mesh, const char* path);

/* ---- coefficient fields and the singular solution ---- */

typedef struct mey_field mey_field;

MEY_API mey_status mey_field_create_identity(mey_field** out);
MEY_API mey_status mey_field_create_example(double mu, mey_field** out);
MEY_API void mey_field_free(mey_field* field);

MEY_API double mey_field_lambda(const mey_field* field);
MEY_API mey_status mey_field_eval_d(const mey_field* field, double x, double y,
                                    double* d);
/* Row-major 2x2 matrix A = a + [[0, d], [-d, 0]]. */
MEY_API mey_status mey_field_eval_matrix(const mey_field* field, double x,
                                         double y, double a[4]);

MEY_API mey_status mey_example_d(double x, double y, double mu, double* d);
/* sup |d| = pi (1 - mu^2) / (2 mu). */
MEY_API double mey_example_d_sup(double mu);
/* u = r^mu cos(theta) and its gradient; undefined at the origin. */
MEY_API mey_status mey_oracle_eval(double mu, double x, double y, double* u,
                                   double grad[2]);

/* ---- BMO seminorm estimator ---- */

typedef struct mey_bmo_result {
    double value;
    double argmax_center_x;
    double argmax_center_y;
    double argmax_radius;
    int n_balls;
} mey_bmo_result;

/* Scalar field callback; return NaN to mark a point as undefined. */
typedef double (*mey_scalar_fn)(double x, double y, void* ctx);

/* Lower bound for the BMO seminorm: max mean oscillation over a grid_n x
 * grid_n center grid in [-1,1]^2 and radii 2^0 .. 2^-radii_min_exp, each ball
 * integrated with a quad_n^2 midpoint polar rule. */
MEY_API mey_status mey_bmo_seminorm(mey_scalar_fn field, void* ctx, int grid_n,
                                    int radii_min_exp, int quad_n,
                                    mey_bmo_result* out);
MEY_API mey_status mey_bmo_seminorm_example(double mu, int grid_n,
                                            int radii_min_exp, int quad_n,
                                            mey_bmo_result* out);

/* ---- solves ---- */

typedef struct mey_solution mey_solution;

typedef enum mey_field_kind { MEY_FIELD_IDENTITY = 0, MEY_FIELD_EXAMPLE = 1 } mey_field_kind;
typedef enum mey_rhs_kind {
    MEY_RHS_ZERO = 0,
    MEY_RHS_CONST = 1,        /* F = (fx, fy) */
    MEY_RHS_MANUFACTURED = 2  /* F = A grad(1 - x^2 - y^2) */
} mey_rhs_kind;
typedef enum mey_bc_kind { MEY_BC_ZERO = 0, MEY_BC_ORACLE = 1 } mey_bc_kind;

typedef struct mey_solve_opts {
    mey_field_kind field;
    double mu;          /* example field parameter */
    int rings;
    int sectors;
    double grading;
    int refine;
    mey_rhs_kind rhs;
    double fx, fy;      /* MEY_RHS_CONST components */
    mey_bc_kind bc;
    double tol;
    int quad_order;     /* 1, 3, or 6 */
    int restart;
    int max_iter;
    int use_jacobi;     /* nonzero: Jacobi preconditioner */
} mey_solve_opts;

typedef struct mey_solve_report {
    int iterations;
    double relative_residual;
    int converged;
} mey_solve_report;

MEY_API void mey_solve_opts_defaults(mey_solve_opts* opts);
MEY_API mey_status mey_solve(const mey_solve_opts* opts, mey_solution** out,
                             mey_solve_report* report);
MEY_API void mey_solution_free(mey_solution* sol);

MEY_API int mey_solution_num_vertices(const mey_solution* sol);
MEY_API mey_status mey_solution_coeff(const mey_solution* sol, int i, double* u);
MEY_API mey_status mey_solution_eval(const mey_solution* sol, double x, double y,
                                     double* u);
MEY_API const mey_mesh* mey_solution_mesh(const mey_solution* sol);
/* CSV "x,y,u" with 17 significant digits. */
MEY_API mey_status mey_solution_write_csv(const mey_solution* sol,
                                          const char* path);

/* ---- analysis ---- */

/* Max interior weak residual of the exact singular solution under the
 * example coefficients, per refinement level 0..levels-1. */
MEY_API mey_status mey_verify_oracle(double mu, int levels, int rings,
                                     int sectors, double grading,
                                     double* max_residuals);

typedef struct mey_fit_result {
    double slope;
    double intercept;
    double r2;
    int n_points;
} mey_fit_result;

MEY_API mey_status mey_fit_exponent(const double* radii, const double* values,
                                    int n, mey_fit_result* out);

/* L^p blow-up threshold of the singular solution: smallest grid p whose
 * dyadic-annulus increments stop decaying. Target is 2 / (1 - mu). */
MEY_API mey_status mey_threshold_lp(double mu, double p_min, double p_max,
                                    double p_step, double* p_star);
/* Growth-modulus exponent of the singular solution (target mu). */
MEY_API mey_status mey_threshold_holder(double mu, double* alpha);
/* Same estimate on a FEM solution with oracle boundary data. */
MEY_API mey_status mey_threshold_holder_fem(const mey_solution* sol, double mu,
                                            double* alpha);

typedef struct mey_scan_opts {
    mey_field_kind field;
    double mu;
    int rings;
    int sectors;
    double grading;
    int refine;
    double p_min, p_max, p_step;
    double ball_r_max;  /* largest ball radius (origin-centered dyadic family) */
    int n_balls;
} mey_scan_opts;

MEY_API void mey_scan_opts_defaults(mey_scan_opts* opts);
MEY_API mey_status mey_scan_num_p(const mey_scan_opts* opts, int* n_p);
/* Degeneration scan over origin-centered dyadic balls. Arrays are indexed by
 * the p grid (length from mey_scan_num_p); ratios may be NULL or length
 * n_p * n_balls (ball-major within each p row). */
MEY_API mey_status mey_scan_meyers(const mey_scan_opts* opts, double* p_values,
                                   double* max_ratio, double* argmax_radius,
                                   double* ratios);

/* Per-level relative H1 errors and GMRES iteration counts of the
 * manufactured solution u* = 1 - x^2 - y^2 with F = A grad u*. */
MEY_API mey_status mey_convergence_manufactured(double mu, int levels, int rings,
                                                int sectors, double* h1_errors,
                                                int* iterations);
/* Per-level L2 errors against the singular solution with oracle boundary
 * data on a graded mesh. */
MEY_API mey_status mey_convergence_oracle(double mu, int levels, int rings,
                                          int sectors, double grading,
                                          double* l2_errors, int* iterations);

/* ---- full verification matrix ---- */

/* Runs the mu x {lp, holder, degeneration, bmo} matrix and writes report.md
 * plus summary.json into out_dir (write-once). n_failed receives the number
 * of failing rows. */
MEY_API mey_status mey_reproduce(const char* out_dir, uint64_t seed,
                                 int* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* MEYERSLAB_H */
