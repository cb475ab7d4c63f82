// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "gmres.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace meyerslab {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace

LinearSolveReport gmres_solve(const CsrMatrix& K, const std::vector<double>& b,
                              std::vector<double>& x, double tol, int restart,
                              int max_iter, Preconditioner precond) {
    require(K.n_rows == K.n_cols, ErrorCode::invalid_argument, "matrix must be square");
    require(static_cast<int>(b.size()) == K.n_rows, ErrorCode::invalid_argument,
            "right side length mismatch");
    require(tol > 0.0 && restart >= 1 && max_iter >= 1, ErrorCode::invalid_argument,
            "invalid solver parameters");

    const int n = K.n_rows;
    x.assign(n, 0.0);

    LinearSolveReport report;
    const double bnorm = norm(b);
    if (bnorm == 0.0) {
        report.converged = true;
        return report;
    }

    std::vector<double> inv_diag(n, 1.0);
    if (precond == Preconditioner::jacobi) {
        const std::vector<double> diag = K.diagonal();
        for (int i = 0; i < n; ++i)
            inv_diag[i] = (std::abs(diag[i]) > 1e-300) ? 1.0 / diag[i] : 1.0;
    }
    auto apply_precond = [&](const std::vector<double>& v) {
        std::vector<double> out(v);
        for (int i = 0; i < n; ++i) out[i] *= inv_diag[i];
        return out;
    };

    const int m = restart;
    std::vector<std::vector<double>> V;
    std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);

    std::vector<double> r = K.multiply(x);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double rnorm = norm(r);
    report.relative_residual = rnorm / bnorm;
    int total_iters = 0;

    while (total_iters < max_iter && rnorm > tol * bnorm) {
        V.assign(1, r);
        for (double& v : V[0]) v /= rnorm;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = rnorm;
        for (auto& row : H) std::fill(row.begin(), row.end(), 0.0);

        int j = 0;
        bool broke_down = false;
        for (; j < m && total_iters < max_iter; ++j) {
            ++total_iters;
            std::vector<double> w = K.multiply(apply_precond(V[j]));
            // Modified Gram-Schmidt.
            for (int i = 0; i <= j; ++i) {
                H[i][j] = dot(w, V[i]);
                for (int k = 0; k < n; ++k) w[k] -= H[i][j] * V[i][k];
            }
            H[j + 1][j] = norm(w);
            if (H[j + 1][j] <= 1e-300) {
                broke_down = true;
                ++j;
                break;
            }
            for (double& v : w) v /= H[j + 1][j];
            V.push_back(std::move(w));

            // Apply accumulated Givens rotations, then form a new one.
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * H[i][j] + sn[i] * H[i + 1][j];
                H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
                H[i][j] = t;
            }
            const double denom = std::hypot(H[j][j], H[j + 1][j]);
            cs[j] = H[j][j] / denom;
            sn[j] = H[j + 1][j] / denom;
            H[j][j] = denom;
            H[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];

            if (std::abs(g[j + 1]) <= tol * bnorm) {
                ++j;
                break;
            }
        }

        // Solve the triangular system for the Krylov coefficients.
        std::vector<double> y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < j; ++k) s -= H[i][k] * y[k];
            y[i] = (std::abs(H[i][i]) > 1e-300) ? s / H[i][i] : 0.0;
        }
        std::vector<double> update(n, 0.0);
        for (int k = 0; k < j; ++k)
            for (int i = 0; i < n; ++i) update[i] += V[k][i] * y[k];
        update = apply_precond(update);
        for (int i = 0; i < n; ++i) x[i] += update[i];

        r = K.multiply(x);
        for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
        rnorm = norm(r);
        report.relative_residual = rnorm / bnorm;

        if (broke_down && rnorm > tol * bnorm) {
            report.breakdown = true;
            break;
        }
    }

    report.iterations = total_iters;
    report.converged = (rnorm <= tol * bnorm);
    return report;
}

} // namespace meyerslab
