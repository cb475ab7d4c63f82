// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "coeff.hpp"
#include "fem.hpp"
#include "geometry.hpp"

namespace meyerslab {

/// Ball or annulus region used to clip integrals.
struct Region {
    enum class Kind { ball, annulus };

    static Region ball(Vec2 center, double radius) {
        return {Kind::ball, center, 0.0, radius};
    }
    static Region annulus(Vec2 center, double r_in, double r_out) {
        return {Kind::annulus, center, r_in, r_out};
    }

    bool contains(Vec2 p) const {
        const double d2 = (p - center).norm2();
        return d2 >= r_in * r_in && d2 <= r_out * r_out;
    }

    Kind kind;
    Vec2 center;
    double r_in;
    double r_out;
};

/// (\int_region |grad u_h|^p)^{1/p} by element quadrature with indicator
/// weighting of nodes. Throws empty-region when no node falls inside.
double lp_norm_gradient(const FemSolution& sol, const Region& region, double p,
                        int quad_order);

/// Same integral for the analytic singular solution over an origin-centered
/// annulus: closed-form radial integral times a trapezoid angular factor.
double oracle_lp_integral(double mu, double p, double r_in, double r_out);
double lp_norm_gradient_oracle(double mu, const Region& region, double p);

/// \int_0^{2pi} (mu^2 cos^2 t + sin^2 t)^{p/2} dt.
double oracle_angular_factor(double mu, double p);

struct AnnulusSeries {
    double p = 2.0;
    std::vector<double> radii;  // decreasing inner radii
    std::vector<double> values; // \int_{B_{1/2} \ B_{r_k}} |grad u|^p
};

/// Either the analytic oracle gradient or a FEM solution.
class GradientSource {
public:
    static GradientSource oracle(double mu);
    static GradientSource fem(const FemSolution* sol);

    bool is_oracle() const { return sol_ == nullptr; }
    double mu() const { return mu_; }
    const FemSolution* solution() const { return sol_; }

private:
    double mu_ = 0.0;
    const FemSolution* sol_ = nullptr;
};

AnnulusSeries annulus_scan(const GradientSource& source, double p,
                           const std::vector<double>& radii, int quad_order);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n_points = 0;
};

/// Least-squares slope of log(value) vs log(r). Throws degenerate-fit for
/// fewer than 4 points or a radius span under two orders of magnitude.
ExponentFit fit_exponent(const std::vector<double>& radii,
                         const std::vector<double>& tail_values);

/// Dyadic-increment series of an annulus scan: increment k (k >= 1) is
/// values[k] - values[k-1], the integral over the annulus between
/// consecutive radii. Its log-log slope against radii[k] estimates
/// (mu-1)p + 2 in every regime (convergent, critical, divergent).
ExponentFit fit_annulus_increments(const AnnulusSeries& series);

struct ThresholdScan {
    std::vector<double> p_grid;
    std::vector<double> slopes;
    double p_star = 0.0; // smallest grid p judged divergent (slope <= 0.05)
};

/// Integrability threshold p* estimating 2/(1-mu). The grid must span the
/// expected threshold; throws evaluation-failure when no divergence shows.
ThresholdScan integrability_threshold(const GradientSource& source,
                                      const std::vector<double>& p_grid,
                                      const std::vector<double>& radii,
                                      int quad_order);

std::vector<double> default_dyadic_radii(double r_max, int count);
std::vector<double> default_p_grid(double p_min, double p_max, double step);

struct HolderEstimate {
    double alpha = 0.0;
    ExponentFit fit;
    std::vector<double> scales;
    std::vector<double> moduli; // M(r) = max_{|x|=r} |u(x) - u(0)|
};

/// Log-log slope of the growth modulus from the origin.
HolderEstimate holder_exponent(const std::function<double(double, double)>& u,
                               double u_at_origin,
                               const std::vector<double>& scales, int n_angles);

/// ||grad u_h||^2_{L2} / ||F||^2_{L2}; throws zero-rhs when ||F|| = 0.
double energy_ratio(const FemSolution& sol, const VectorField& F, int quad_order);

/// Interior Caccioppoli quotient: gradient energy on the r-ball over the
/// bracket r^{4/s'-2}(d_bmo^2+1)(\int |u-hat|^{2s/(2-s)})^{(2-s)/s} + \int |F|^2
/// on the 3r/2-ball. The ball mean is dropped when the ball meets the
/// complement of the domain polygon. Returns 0 when the numerator vanishes.
double caccioppoli_ratio(const FemSolution& sol, const VectorField& F, Vec2 x0,
                         double r, double s, double d_bmo, int quad_order);

/// Quadrature samples of a scalar pair (g, f) with positive weights.
struct WeightedSamples {
    std::vector<Vec2> pts;
    std::vector<double> w;
    std::vector<double> g;
    std::vector<double> f;
};

WeightedSamples samples_from_fem(const FemSolution& sol, const VectorField& F,
                                 int quad_order);
/// Polar samples of the oracle gradient over B_1 with log-spaced radial bands
/// down to the cutoff radius.
WeightedSamples samples_from_oracle(double mu, double cutoff, int n_radial,
                                    int n_angular);

struct RHScanResult {
    std::vector<double> p_grid;
    std::vector<double> max_ratio;               // per p
    std::vector<int> argmax_ball;                // per p
    std::vector<std::vector<double>> ratios;     // [p][ball]
    std::vector<Vec2> centers;                   // ball family
    std::vector<double> radii;
    double p_star = 0.0;
};

/// Degeneration scan: for each p and each ball B, the quotient
///   (mean_B g^p)^{1/p} / [ (mean_ref g^2)^{1/2} + (mean_ref f^p)^{1/p} ],
/// with the reference means taken over the whole sample set. The quotient is
/// scale-free in (g, f); its growth along balls shrinking into a singular
/// point is the numerical signature that the p-estimate degenerates.
/// p_star is the largest grid p whose max ratio stays below 10x the p = 2
/// value.
RHScanResult reverse_holder_scan(const WeightedSamples& samples,
                                 const std::vector<Vec2>& centers,
                                 const std::vector<double>& radii,
                                 const std::vector<double>& p_grid);

} // namespace meyerslab
