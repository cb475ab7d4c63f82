// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "coeff.hpp"
#include "gmres.hpp"
#include "mesh.hpp"
#include "sparse.hpp"

namespace meyerslab {

/// Vector field evaluator for right sides F (weak load \int F . grad phi_i).
using VectorField = std::function<Vec2(double, double)>;
/// Boundary data evaluator.
using BoundaryData = std::function<double(double, double)>;
/// Exact-gradient evaluator for weak residuals.
using GradientField = std::function<Vec2(double, double)>;

/// Stiffness split into the symmetric a-part and the exactly antisymmetric
/// d-part, K = K_sym + K_skew.
struct StiffnessParts {
    CsrMatrix sym;
    CsrMatrix skew;

    CsrMatrix combined() const { return sym.plus(skew); }
};

/// Assembles K[i][j] = sum_T \int_T <A grad phi_j, grad phi_i>. Elements with
/// a vertex at the origin use the 1-point centroid rule so the coefficient is
/// never sampled at its undefined point. The skew block is assembled once per
/// vertex pair, so K_skew^T = -K_skew holds exactly.
StiffnessParts assemble_stiffness(const Mesh& mesh, const CoefficientField& field,
                                  int quad_order);

/// Load vector b[i] = sum_T \int_T F . grad phi_i.
std::vector<double> assemble_load(const Mesh& mesh, const VectorField& F,
                                  int quad_order);

/// Dirichlet conditions by row replacement: boundary rows become identity
/// rows with b = g; interior rows move known boundary contributions to the
/// right side. Returns modified copies.
void apply_dirichlet(const CsrMatrix& K, const std::vector<double>& b,
                     const Mesh& mesh, const BoundaryData& g, CsrMatrix& K_out,
                     std::vector<double>& b_out);

/// Piecewise-linear solution tied to its mesh and coefficient field.
class FemSolution {
public:
    FemSolution(std::shared_ptr<const Mesh> mesh,
                std::shared_ptr<const CoefficientField> field,
                std::vector<double> coeffs);

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
    const CoefficientField& field() const { return *field_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Constant gradient on element t.
    Vec2 element_gradient(int t) const;

    /// Point evaluation via the locator; throws empty-region when the point
    /// lies outside the triangulation.
    double value_at(Vec2 p) const;

    /// Exact squared L2 norm of the gradient (per-element constant sums).
    double gradient_l2_squared() const;

    void write_csv(const std::string& path) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    std::shared_ptr<const CoefficientField> field_;
    std::vector<double> coeffs_;
    mutable std::unique_ptr<MeshLocator> locator_;
};

struct SolveOptions {
    int quad_order = 3;
    double tol = 1e-10;
    int restart = 50;
    int max_iter = 2000;
    Preconditioner precond = Preconditioner::jacobi;
};

/// Assemble + Dirichlet + GMRES. Boundary coefficients are set to g exactly.
/// F may be null (zero load); g may be null (zero data).
FemSolution solve_problem(std::shared_ptr<const Mesh> mesh,
                          std::shared_ptr<const CoefficientField> field,
                          const VectorField& F, const BoundaryData& g,
                          const SolveOptions& opts, LinearSolveReport& report);

/// Weak residual r[i] = sum_T \int_T <A grad_u, grad phi_i> for interior
/// vertices i; boundary entries are zero. Origin-touching elements fall back
/// to the centroid rule.
std::vector<double> weak_residual(const Mesh& mesh, const CoefficientField& field,
                                  const GradientField& grad_u, int quad_order);

} // namespace meyerslab
