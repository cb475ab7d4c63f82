// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "sparse.hpp"

namespace meyerslab {

enum class Preconditioner { none, jacobi };

struct LinearSolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    bool breakdown = false;
};

/// Restarted GMRES with right preconditioning, so the residual test is on the
/// true residual: converged means ||Kx - b|| <= tol * ||b||. Deterministic
/// for fixed inputs. Breakdown (vanishing Krylov basis norm) is reported, not
/// thrown.
LinearSolveReport gmres_solve(const CsrMatrix& K, const std::vector<double>& b,
                              std::vector<double>& x, double tol, int restart,
                              int max_iter, Preconditioner precond);

} // namespace meyerslab
