// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace meyerslab {

namespace {

struct ElementMatrices {
    std::array<int, 3> v;
    // sym[i][j] = \int <a grad phi_j, grad phi_i>, symmetric.
    std::array<std::array<double, 3>, 3> sym;
    // Skew scalar weight: \int_T d dx; the skew entry is w * cross(grad_j, grad_i).
    std::array<std::array<double, 3>, 3> skew;
};

std::span<const TriQuadNode> element_rule(const Mesh& mesh, int t, int quad_order) {
    return triangle_rule(mesh.touches_origin(t) ? 1 : quad_order);
}

} // namespace

StiffnessParts assemble_stiffness(const Mesh& mesh, const CoefficientField& field,
                                  int quad_order) {
    triangle_rule(quad_order); // validate order early
    const int nt = mesh.num_triangles();
    const int nv = mesh.num_vertices();

    std::vector<ElementMatrices> local(nt);
    parallel_for(static_cast<std::size_t>(nt), [&](std::size_t t) {
        const Triangle& tri = mesh.triangle(static_cast<int>(t));
        const ElementGeometry geom = mesh.element_geometry(static_cast<int>(t));
        const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh.vertex(tri.v[2]).pos();

        ElementMatrices em;
        em.v = tri.v;
        for (auto& row : em.sym) row.fill(0.0);
        for (auto& row : em.skew) row.fill(0.0);

        double d_integral = 0.0;
        std::array<std::array<double, 3>, 3> a_quad{};
        for (const TriQuadNode& q :
             element_rule(mesh, static_cast<int>(t), quad_order)) {
            const Vec2 xq = barycentric_point(q, p0, p1, p2);
            const Mat2 a = field.eval_a(xq.x, xq.y);
            double d = 0.0;
            try {
                d = field.eval_d(xq.x, xq.y);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::undefined_at_origin)
                    fail(ErrorCode::coefficient_undefined,
                         "coefficient undefined at a quadrature node");
                throw;
            }
            const double w = q.w * geom.area;
            d_integral += w * d;
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j)
                    a_quad[i][j] += w * geom.grad_basis[i].dot(a.apply(geom.grad_basis[j]));
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                em.sym[i][j] = a_quad[i][j];
                em.sym[j][i] = a_quad[i][j];
            }
        }
        // <D grad phi_j, grad phi_i> = d * (grad phi_i x grad phi_j); computed
        // once per unordered pair and negated, so the block is antisymmetric
        // exactly.
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const double s =
                    d_integral * geom.grad_basis[i].cross(geom.grad_basis[j]);
                em.skew[i][j] = s;
                em.skew[j][i] = -s;
            }
        }
        local[t] = em;
    });

    std::vector<int> rows, cols;
    std::vector<double> sym_vals, skew_vals;
    rows.reserve(static_cast<std::size_t>(nt) * 9);
    cols.reserve(static_cast<std::size_t>(nt) * 9);
    sym_vals.reserve(static_cast<std::size_t>(nt) * 9);
    skew_vals.reserve(static_cast<std::size_t>(nt) * 9);
    for (const ElementMatrices& em : local) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                rows.push_back(em.v[i]);
                cols.push_back(em.v[j]);
                sym_vals.push_back(em.sym[i][j]);
                skew_vals.push_back(em.skew[i][j]);
            }
        }
    }

    StiffnessParts parts;
    parts.sym = CsrMatrix::from_triplets(nv, nv, rows, cols, sym_vals);
    parts.skew = CsrMatrix::from_triplets(nv, nv, rows, cols, skew_vals);

    // Antisymmetrize accumulation roundoff in the assembled skew block.
    for (int i = 0; i < nv; ++i) {
        for (int k = parts.skew.row_ptr[i]; k < parts.skew.row_ptr[i + 1]; ++k) {
            const int j = parts.skew.col_idx[k];
            if (j <= i) continue;
            const double v = parts.skew.values[k];
            for (int k2 = parts.skew.row_ptr[j]; k2 < parts.skew.row_ptr[j + 1]; ++k2) {
                if (parts.skew.col_idx[k2] == i) {
                    parts.skew.values[k2] = -v;
                    break;
                }
            }
        }
        // Skew diagonals are identically zero.
        for (int k = parts.skew.row_ptr[i]; k < parts.skew.row_ptr[i + 1]; ++k)
            if (parts.skew.col_idx[k] == i) parts.skew.values[k] = 0.0;
    }
    return parts;
}

std::vector<double> assemble_load(const Mesh& mesh, const VectorField& F,
                                  int quad_order) {
    triangle_rule(quad_order);
    const int nt = mesh.num_triangles();
    std::vector<double> b(mesh.num_vertices(), 0.0);
    if (!F) return b;

    std::vector<std::array<double, 3>> local(nt);
    parallel_for(static_cast<std::size_t>(nt), [&](std::size_t t) {
        const ElementGeometry geom = mesh.element_geometry(static_cast<int>(t));
        const Triangle& tri = mesh.triangle(static_cast<int>(t));
        const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh.vertex(tri.v[2]).pos();
        std::array<double, 3> le{0.0, 0.0, 0.0};
        for (const TriQuadNode& q :
             element_rule(mesh, static_cast<int>(t), quad_order)) {
            const Vec2 xq = barycentric_point(q, p0, p1, p2);
            const Vec2 f = F(xq.x, xq.y);
            const double w = q.w * geom.area;
            for (int i = 0; i < 3; ++i) le[i] += w * f.dot(geom.grad_basis[i]);
        }
        local[t] = le;
    });
    for (int t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) b[mesh.triangle(t).v[i]] += local[t][i];
    return b;
}

void apply_dirichlet(const CsrMatrix& K, const std::vector<double>& b,
                     const Mesh& mesh, const BoundaryData& g, CsrMatrix& K_out,
                     std::vector<double>& b_out) {
    require(K.n_rows == mesh.num_vertices() &&
                static_cast<int>(b.size()) == K.n_rows,
            ErrorCode::invalid_argument, "system size does not match the mesh");

    std::vector<char> is_bdry(mesh.num_vertices(), 0);
    std::vector<double> gval(mesh.num_vertices(), 0.0);
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        const Vertex& v = mesh.vertex(i);
        if (v.on_boundary) {
            is_bdry[i] = 1;
            gval[i] = g ? g(v.x, v.y) : 0.0;
        }
    }

    K_out = K;
    b_out = b;
    for (int i = 0; i < K.n_rows; ++i) {
        if (is_bdry[i]) {
            for (int k = K_out.row_ptr[i]; k < K_out.row_ptr[i + 1]; ++k)
                K_out.values[k] = (K_out.col_idx[k] == i) ? 1.0 : 0.0;
            b_out[i] = gval[i];
        } else {
            for (int k = K_out.row_ptr[i]; k < K_out.row_ptr[i + 1]; ++k) {
                const int j = K_out.col_idx[k];
                if (is_bdry[j]) {
                    b_out[i] -= K_out.values[k] * gval[j];
                    K_out.values[k] = 0.0;
                }
            }
        }
    }
}

FemSolution::FemSolution(std::shared_ptr<const Mesh> mesh,
                         std::shared_ptr<const CoefficientField> field,
                         std::vector<double> coeffs)
    : mesh_(std::move(mesh)), field_(std::move(field)), coeffs_(std::move(coeffs)) {
    require(static_cast<int>(coeffs_.size()) == mesh_->num_vertices(),
            ErrorCode::invalid_argument,
            "coefficient vector length must equal the vertex count");
}

Vec2 FemSolution::element_gradient(int t) const {
    const ElementGeometry geom = mesh_->element_geometry(t);
    const Triangle& tri = mesh_->triangle(t);
    Vec2 grad{0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        grad = grad + coeffs_[tri.v[i]] * geom.grad_basis[i];
    return grad;
}

double FemSolution::value_at(Vec2 p) const {
    if (!locator_) locator_ = std::make_unique<MeshLocator>(*mesh_);
    std::array<double, 3> bary{};
    const int t = locator_->locate(p, &bary);
    if (t < 0)
        fail(ErrorCode::empty_region, "evaluation point lies outside the mesh");
    const Triangle& tri = mesh_->triangle(t);
    return bary[0] * coeffs_[tri.v[0]] + bary[1] * coeffs_[tri.v[1]] +
           bary[2] * coeffs_[tri.v[2]];
}

double FemSolution::gradient_l2_squared() const {
    double sum = 0.0;
    for (int t = 0; t < mesh_->num_triangles(); ++t) {
        const ElementGeometry geom = mesh_->element_geometry(t);
        sum += geom.area * element_gradient(t).norm2();
    }
    return sum;
}

void FemSolution::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) fail(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
    std::fprintf(f, "x,y,u\n");
    for (int i = 0; i < mesh_->num_vertices(); ++i) {
        const Vertex& v = mesh_->vertex(i);
        std::fprintf(f, "%.17g,%.17g,%.17g\n", v.x, v.y, coeffs_[i]);
    }
    std::fclose(f);
}

FemSolution solve_problem(std::shared_ptr<const Mesh> mesh,
                          std::shared_ptr<const CoefficientField> field,
                          const VectorField& F, const BoundaryData& g,
                          const SolveOptions& opts, LinearSolveReport& report) {
    const StiffnessParts parts = assemble_stiffness(*mesh, *field, opts.quad_order);
    const CsrMatrix K = parts.combined();
    const std::vector<double> b = assemble_load(*mesh, F, opts.quad_order);

    CsrMatrix K_bc;
    std::vector<double> b_bc;
    apply_dirichlet(K, b, *mesh, g, K_bc, b_bc);

    std::vector<double> x;
    report = gmres_solve(K_bc, b_bc, x, opts.tol, opts.restart, opts.max_iter,
                         opts.precond);
    if (!report.converged)
        fail(ErrorCode::no_convergence,
             "GMRES did not reach the requested tolerance");

    // Boundary rows are identity rows; pin the data exactly.
    for (int i = 0; i < mesh->num_vertices(); ++i) {
        const Vertex& v = mesh->vertex(i);
        if (v.on_boundary) x[i] = g ? g(v.x, v.y) : 0.0;
    }
    return FemSolution(std::move(mesh), std::move(field), std::move(x));
}

std::vector<double> weak_residual(const Mesh& mesh, const CoefficientField& field,
                                  const GradientField& grad_u, int quad_order) {
    triangle_rule(quad_order);
    const int nt = mesh.num_triangles();
    std::vector<std::array<double, 3>> local(nt);
    parallel_for(static_cast<std::size_t>(nt), [&](std::size_t t) {
        const ElementGeometry geom = mesh.element_geometry(static_cast<int>(t));
        const Triangle& tri = mesh.triangle(static_cast<int>(t));
        const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh.vertex(tri.v[2]).pos();
        std::array<double, 3> le{0.0, 0.0, 0.0};
        const auto accumulate = [&](Vec2 xq, double w) {
            const Vec2 flux = field.eval_matrix(xq.x, xq.y).apply(grad_u(xq.x, xq.y));
            for (int i = 0; i < 3; ++i) le[i] += w * flux.dot(geom.grad_basis[i]);
        };
        if (mesh.touches_origin(static_cast<int>(t))) {
            // grad_u may blow up at the origin; resolve the corner
            // singularity with the dyadically graded rule (nodes stay away
            // from the origin vertex).
            std::array<Vec2, 3> p{p0, p1, p2};
            int corner = 0;
            for (int i = 0; i < 3; ++i)
                if (mesh.is_origin_vertex(tri.v[i])) corner = i;
            for_each_corner_graded_node(p[corner], p[(corner + 1) % 3],
                                        p[(corner + 2) % 3], 24, accumulate);
        } else {
            for (const TriQuadNode& q : triangle_rule(quad_order))
                accumulate(barycentric_point(q, p0, p1, p2), q.w * geom.area);
        }
        local[t] = le;
    });

    std::vector<double> r(mesh.num_vertices(), 0.0);
    for (int t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) r[mesh.triangle(t).v[i]] += local[t][i];
    for (int i = 0; i < mesh.num_vertices(); ++i)
        if (mesh.vertex(i).on_boundary) r[i] = 0.0;
    return r;
}

} // namespace meyerslab
