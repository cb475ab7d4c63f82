// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "coeff.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace meyerslab {

double example_d(double x, double y, double mu) {
    require(mu > 0.0 && mu < 1.0, ErrorCode::invalid_argument, "mu must lie in (0,1)");
    const double c_mu = (mu * mu - 1.0) / mu;
    if (x != 0.0) return c_mu * std::atan(y / x);
    if (y == 0.0)
        fail(ErrorCode::undefined_at_origin, "example d is undefined at the origin");
    return c_mu * (M_PI / 2.0) * (y > 0.0 ? 1.0 : -1.0);
}

double example_d_sup(double mu) {
    return M_PI * (1.0 - mu * mu) / (2.0 * mu);
}

CoefficientField CoefficientField::identity() {
    return CoefficientField(Kind::identity, 0.0, 1.0);
}

CoefficientField CoefficientField::example(double mu) {
    require(mu > 0.0 && mu < 1.0, ErrorCode::invalid_argument, "mu must lie in (0,1)");
    // The example quadratic form is exactly |xi|^2, so Lambda = 1.
    return CoefficientField(Kind::example, mu, 1.0);
}

CoefficientField CoefficientField::custom(SymmetricPart a, SkewPart d,
                                          double lambda) {
    require(static_cast<bool>(a), ErrorCode::invalid_argument,
            "custom field needs a symmetric part");
    require(lambda > 0.0, ErrorCode::invalid_argument, "lambda must be positive");
    CoefficientField field(Kind::custom, 0.0, lambda);
    field.custom_a_ = std::move(a);
    field.custom_d_ = std::move(d);
    return field;
}

Mat2 CoefficientField::eval_a(double x, double y) const {
    if (kind_ == Kind::custom) return custom_a_(x, y);
    return Mat2::identity();
}

double CoefficientField::eval_d(double x, double y) const {
    switch (kind_) {
        case Kind::identity: return 0.0;
        case Kind::example: return example_d(x, y, mu_);
        case Kind::custom: return custom_d_ ? custom_d_(x, y) : 0.0;
    }
    return 0.0;
}

Mat2 CoefficientField::eval_matrix(double x, double y) const {
    Mat2 m = eval_a(x, y);
    const double d = eval_d(x, y);
    m.a12 += d;
    m.a21 -= d;
    return m;
}

OracleSolution::OracleSolution(double mu) : mu_(mu) {
    require(mu > 0.0 && mu < 1.0, ErrorCode::invalid_argument, "mu must lie in (0,1)");
}

double OracleSolution::value(double x, double y) const {
    const double r2 = x * x + y * y;
    if (r2 == 0.0)
        fail(ErrorCode::undefined_at_origin, "oracle solution undefined at the origin");
    return x * std::pow(r2, (mu_ - 1.0) / 2.0);
}

Vec2 OracleSolution::gradient(double x, double y) const {
    const double r2 = x * x + y * y;
    if (r2 == 0.0)
        fail(ErrorCode::undefined_at_origin, "oracle gradient undefined at the origin");
    // u_x = r^(mu-1) (mu cos^2 + sin^2),  u_y = (mu-1) r^(mu-1) sin cos.
    const double s = std::pow(r2, (mu_ - 3.0) / 2.0);
    return {s * (r2 + (mu_ - 1.0) * x * x), s * (mu_ - 1.0) * x * y};
}

namespace {

/// Mean oscillation of `field` over one ball; NaN when the undefined-node
/// fraction exceeds the tolerance.
double ball_mean_oscillation(const ScalarField& field, Vec2 center, double radius,
                             int quad_n, bool* eval_failed) {
    std::vector<double> values;
    std::vector<double> weights;
    values.reserve(static_cast<std::size_t>(quad_n) * quad_n);
    weights.reserve(static_cast<std::size_t>(quad_n) * quad_n);
    std::size_t undefined = 0;
    for_each_polar_node(center, radius, quad_n, [&](Vec2 p, double w) {
        const double v = field(p.x, p.y);
        if (std::isnan(v)) {
            ++undefined;
            return;
        }
        values.push_back(v);
        weights.push_back(w);
    });
    const std::size_t total = static_cast<std::size_t>(quad_n) * quad_n;
    if (undefined > total / 1000) {
        *eval_failed = true;
        return std::numeric_limits<double>::quiet_NaN();
    }

    double wsum = 0.0, fsum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        wsum += weights[i];
        fsum += weights[i] * values[i];
    }
    const double mean = fsum / wsum;
    double osc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        osc += weights[i] * std::abs(values[i] - mean);
    return osc / wsum;
}

} // namespace

BmoEstimate bmo_seminorm(const ScalarField& field, const std::vector<Vec2>& centers,
                         const std::vector<double>& radii, int quad_n) {
    require(!centers.empty() && !radii.empty(), ErrorCode::invalid_argument,
            "bmo sampling must contain at least one center and one radius");
    require(quad_n >= 64, ErrorCode::invalid_argument, "quad_n must be >= 64");
    for (double r : radii)
        require(r > 0.0, ErrorCode::invalid_argument, "radii must be positive");

    const std::size_t n_balls = centers.size() * radii.size();
    std::vector<double> osc(n_balls);
    std::vector<char> failed(n_balls, 0);
    parallel_for(n_balls, [&](std::size_t b) {
        const Vec2 c = centers[b / radii.size()];
        const double r = radii[b % radii.size()];
        bool eval_failed = false;
        osc[b] = ball_mean_oscillation(field, c, r, quad_n, &eval_failed);
        failed[b] = eval_failed ? 1 : 0;
    });

    BmoEstimate est;
    est.n_centers = static_cast<int>(centers.size());
    est.n_scales = static_cast<int>(radii.size());
    est.quad_points_per_ball = quad_n * quad_n;
    est.value = -1.0;
    for (std::size_t b = 0; b < n_balls; ++b) {
        if (failed[b])
            fail(ErrorCode::evaluation_failure,
                 "field undefined on more than 0.1% of a ball's quadrature nodes");
        if (osc[b] > est.value) {
            est.value = osc[b];
            est.argmax_center = centers[b / radii.size()];
            est.argmax_radius = radii[b % radii.size()];
        }
    }
    return est;
}

BmoEstimate bmo_seminorm_default(const ScalarField& field, int grid_n,
                                 int radii_min_exp, int quad_n) {
    require(grid_n >= 2, ErrorCode::invalid_argument, "grid_n must be >= 2");
    require(radii_min_exp >= 0, ErrorCode::invalid_argument,
            "radii_min_exp must be >= 0");
    std::vector<Vec2> centers;
    centers.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const double x = -1.0 + 2.0 * i / (grid_n - 1);
            const double y = -1.0 + 2.0 * j / (grid_n - 1);
            centers.push_back({x, y});
        }
    }
    std::vector<double> radii;
    for (int k = 0; k <= radii_min_exp; ++k) radii.push_back(std::pow(2.0, -k));
    return bmo_seminorm(field, centers, radii, quad_n);
}

} // namespace meyerslab
