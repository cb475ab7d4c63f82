// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "geometry.hpp"

namespace meyerslab {

/// Skew scalar of the rotating example family:
///   d(x, y) = C_mu * arctan(y/x)          for x != 0,
///   d(0, y) = C_mu * (pi/2) * sgn(y)      for y != 0,
/// with C_mu = (mu^2 - 1) / mu. Undefined at the origin (throws).
double example_d(double x, double y, double mu);

/// sup |d| = pi (1 - mu^2) / (2 mu) for mu in (0, 1).
double example_d_sup(double mu);

/// Coefficient matrix A = a + d with symmetric a and skew scalar d acting as
/// [[0, d], [-d, 0]]. The example family has a = I and ellipticity constant 1.
class CoefficientField {
public:
    enum class Kind { identity, example, custom };

    using SymmetricPart = std::function<Mat2(double, double)>;
    using SkewPart = std::function<double(double, double)>;

    static CoefficientField identity();
    static CoefficientField example(double mu);
    /// User-supplied parts; a must return symmetric matrices satisfying
    /// lambda |xi|^2 <= <a xi, xi> and |a| <= 1/lambda (spot-checked by
    /// check_ellipticity, not enforced per call).
    static CoefficientField custom(SymmetricPart a, SkewPart d, double lambda);

    Kind kind() const { return kind_; }
    double mu() const { return mu_; }
    double lambda() const { return lambda_; }

    /// Symmetric part at (x, y).
    Mat2 eval_a(double x, double y) const;
    /// Skew scalar at (x, y); 0 for the identity field.
    double eval_d(double x, double y) const;
    /// Full matrix A = a + [[0, d], [-d, 0]].
    Mat2 eval_matrix(double x, double y) const;

private:
    CoefficientField(Kind kind, double mu, double lambda)
        : kind_(kind), mu_(mu), lambda_(lambda) {}

    Kind kind_;
    double mu_;
    double lambda_;
    SymmetricPart custom_a_;
    SkewPart custom_d_;
};

/// Randomized spot check of symmetry and the two-sided ellipticity bound at
/// n sample points in [-1,1]^2 (origin skipped). Throws on violation.
void check_ellipticity(const CoefficientField& field, int n_samples,
                       std::uint64_t seed);

/// Singular solution u = r^mu cos(theta) = x (x^2+y^2)^((mu-1)/2) and its
/// gradient. Undefined at the origin.
class OracleSolution {
public:
    explicit OracleSolution(double mu);

    double mu() const { return mu_; }
    double value(double x, double y) const;
    Vec2 gradient(double x, double y) const;

private:
    double mu_;
};

struct BmoEstimate {
    double value = 0.0;
    Vec2 argmax_center{};
    double argmax_radius = 0.0;
    int n_centers = 0;
    int n_scales = 0;
    int quad_points_per_ball = 0;
};

/// Scalar field under test; return NaN to mark a point as undefined.
using ScalarField = std::function<double(double, double)>;

/// Max over (center, radius) pairs of the mean oscillation
/// (1/|B|) \int_B |f - mean_B f|, each ball integrated with a quad_n^2
/// midpoint polar rule. A finite sample, so the result is a lower bound for
/// the BMO seminorm. Throws evaluation-failure if more than 0.1% of the
/// nodes of some ball are undefined.
BmoEstimate bmo_seminorm(const ScalarField& field, const std::vector<Vec2>& centers,
                         const std::vector<double>& radii, int quad_n);

/// Default sampling of the spec'd estimator: grid_n x grid_n centers in
/// [-1,1]^2 and radii 2^0 .. 2^{-radii_min_exp}.
BmoEstimate bmo_seminorm_default(const ScalarField& field, int grid_n,
                                 int radii_min_exp, int quad_n);

} // namespace meyerslab
