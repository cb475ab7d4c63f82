// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace meyerslab {

namespace {

constexpr double kDivergenceSlope = 0.05;

/// Element-quadrature sweep over a FEM solution; calls fn(point, weight,
/// |grad u_h|) for every node. Origin-touching elements use the centroid rule.
template <typename Fn>
void for_each_gradient_node(const FemSolution& sol, int quad_order, Fn&& fn) {
    const Mesh& mesh = sol.mesh();
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geom = mesh.element_geometry(t);
        const Triangle& tri = mesh.triangle(t);
        const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh.vertex(tri.v[2]).pos();
        const double gnorm = sol.element_gradient(t).norm();
        const auto rule = triangle_rule(mesh.touches_origin(t) ? 1 : quad_order);
        for (const TriQuadNode& q : rule)
            fn(barycentric_point(q, p0, p1, p2), q.w * geom.area, gnorm);
    }
}

} // namespace

double lp_norm_gradient(const FemSolution& sol, const Region& region, double p,
                        int quad_order) {
    require(p >= 1.0, ErrorCode::invalid_argument, "p must be >= 1");
    double sum = 0.0;
    std::size_t inside = 0;
    for_each_gradient_node(sol, quad_order, [&](Vec2 x, double w, double g) {
        if (region.contains(x)) {
            sum += w * std::pow(g, p);
            ++inside;
        }
    });
    if (inside == 0)
        fail(ErrorCode::empty_region, "no quadrature point falls inside the region");
    return std::pow(sum, 1.0 / p);
}

double oracle_angular_factor(double mu, double p) {
    // Smooth periodic integrand: the midpoint rule converges spectrally.
    constexpr int n = 4096;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * (i + 0.5) / n;
        const double c = std::cos(t), s = std::sin(t);
        sum += std::pow(mu * mu * c * c + s * s, p / 2.0);
    }
    return sum * 2.0 * M_PI / n;
}

double oracle_lp_integral(double mu, double p, double r_in, double r_out) {
    require(mu > 0.0 && mu < 1.0, ErrorCode::invalid_argument, "mu must lie in (0,1)");
    require(r_out > r_in && r_in >= 0.0, ErrorCode::invalid_argument,
            "annulus radii must satisfy 0 <= r_in < r_out");
    const double a = (mu - 1.0) * p + 2.0;
    double radial;
    if (std::abs(a) < 1e-13) {
        require(r_in > 0.0, ErrorCode::invalid_argument,
                "critical-exponent integral diverges at the origin");
        radial = std::log(r_out / r_in);
    } else {
        if (r_in == 0.0)
            require(a > 0.0, ErrorCode::invalid_argument,
                    "integral diverges at the origin for this exponent");
        radial = (std::pow(r_out, a) - (r_in > 0.0 ? std::pow(r_in, a) : 0.0)) / a;
    }
    return oracle_angular_factor(mu, p) * radial;
}

double lp_norm_gradient_oracle(double mu, const Region& region, double p) {
    require(region.center.x == 0.0 && region.center.y == 0.0,
            ErrorCode::invalid_argument,
            "oracle lp norms support origin-centered regions only");
    return std::pow(oracle_lp_integral(mu, p, region.r_in, region.r_out), 1.0 / p);
}

GradientSource GradientSource::oracle(double mu) {
    GradientSource s;
    s.mu_ = mu;
    return s;
}

GradientSource GradientSource::fem(const FemSolution* sol) {
    require(sol != nullptr, ErrorCode::invalid_argument, "null FEM solution");
    GradientSource s;
    s.sol_ = sol;
    if (sol->field().kind() == CoefficientField::Kind::example)
        s.mu_ = sol->field().mu();
    return s;
}

AnnulusSeries annulus_scan(const GradientSource& source, double p,
                           const std::vector<double>& radii, int quad_order) {
    require(radii.size() >= 2, ErrorCode::invalid_argument,
            "annulus scan needs at least two radii");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        require(radii[k] > 0.0 && radii[k] < 0.5, ErrorCode::invalid_argument,
                "annulus radii must lie in (0, 1/2)");
        if (k > 0)
            require(radii[k] < radii[k - 1], ErrorCode::invalid_argument,
                    "annulus radii must decrease");
    }

    AnnulusSeries series;
    series.p = p;
    series.radii = radii;
    series.values.resize(radii.size());

    if (source.is_oracle()) {
        for (std::size_t k = 0; k < radii.size(); ++k)
            series.values[k] = oracle_lp_integral(source.mu(), p, radii[k], 0.5);
        return series;
    }

    // One sweep over the mesh; each node lands in the innermost annulus that
    // contains it, then a suffix sum produces the nested-region integrals.
    const FemSolution& sol = *source.solution();
    std::vector<double> shell(radii.size() + 1, 0.0);
    for_each_gradient_node(sol, quad_order, [&](Vec2 x, double w, double g) {
        const double r = x.norm();
        if (r > 0.5) return;
        // Index of the smallest k with radii[k] < r (nodes between radii[k-1]
        // and radii[k] belong to shell k).
        std::size_t k = 0;
        while (k < radii.size() && r <= radii[k]) ++k;
        shell[k] += w * std::pow(g, p);
    });
    double acc = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        acc += shell[k];
        series.values[k] = acc;
    }
    return series;
}

ExponentFit fit_exponent(const std::vector<double>& radii,
                         const std::vector<double>& tail_values) {
    require(radii.size() == tail_values.size(), ErrorCode::invalid_argument,
            "fit inputs must have equal length");
    require(radii.size() >= 4, ErrorCode::degenerate_fit,
            "exponent fit needs at least 4 points");
    double rmin = radii[0], rmax = radii[0];
    for (double r : radii) {
        require(r > 0.0, ErrorCode::invalid_argument, "fit radii must be positive");
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    require(rmax / rmin >= 100.0, ErrorCode::degenerate_fit,
            "fit radii must span at least two orders of magnitude");
    for (double v : tail_values)
        require(v > 0.0, ErrorCode::invalid_argument, "fit values must be positive");

    const std::size_t n = radii.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(radii[i]);
        const double y = std::log(tail_values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    ExponentFit fit;
    fit.n_points = static_cast<int>(n);
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ymean = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(radii[i]);
        const double y = std::log(tail_values[i]);
        const double yhat = fit.intercept + fit.slope * x;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r2 = (ss_tot > 0.0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

ExponentFit fit_annulus_increments(const AnnulusSeries& series) {
    require(series.values.size() >= 5, ErrorCode::degenerate_fit,
            "increment fit needs at least 5 scan radii");
    std::vector<double> radii, increments;
    for (std::size_t k = 1; k < series.radii.size(); ++k) {
        const double d = series.values[k] - series.values[k - 1];
        if (d > 0.0) {
            radii.push_back(series.radii[k]);
            increments.push_back(d);
        }
    }
    return fit_exponent(radii, increments);
}

ThresholdScan integrability_threshold(const GradientSource& source,
                                      const std::vector<double>& p_grid,
                                      const std::vector<double>& radii,
                                      int quad_order) {
    require(p_grid.size() >= 2, ErrorCode::invalid_argument, "p grid too small");
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        require(p_grid[i] > p_grid[i - 1], ErrorCode::invalid_argument,
                "p grid must increase");

    ThresholdScan scan;
    scan.p_grid = p_grid;
    scan.slopes.resize(p_grid.size());
    parallel_for(p_grid.size(), [&](std::size_t i) {
        const AnnulusSeries series =
            annulus_scan(source, p_grid[i], radii, quad_order);
        scan.slopes[i] = fit_annulus_increments(series).slope;
    });

    scan.p_star = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (scan.slopes[i] <= kDivergenceSlope) {
            scan.p_star = p_grid[i];
            break;
        }
    }
    if (std::isnan(scan.p_star))
        fail(ErrorCode::evaluation_failure,
             "no divergent exponent found in the scanned p range");
    return scan;
}

std::vector<double> default_dyadic_radii(double r_max, int count) {
    require(r_max > 0.0 && r_max < 0.5 && count >= 2, ErrorCode::invalid_argument,
            "invalid dyadic radius family");
    std::vector<double> radii(count);
    for (int k = 0; k < count; ++k) radii[k] = r_max * std::pow(2.0, -k);
    return radii;
}

std::vector<double> default_p_grid(double p_min, double p_max, double step) {
    require(p_min >= 1.0 && p_max > p_min && step > 0.0, ErrorCode::invalid_argument,
            "invalid p grid");
    std::vector<double> grid;
    for (double p = p_min; p <= p_max + 1e-12; p += step) grid.push_back(p);
    return grid;
}

HolderEstimate holder_exponent(const std::function<double(double, double)>& u,
                               double u_at_origin,
                               const std::vector<double>& scales, int n_angles) {
    require(n_angles >= 8, ErrorCode::invalid_argument, "n_angles must be >= 8");
    for (std::size_t k = 0; k < scales.size(); ++k) {
        require(scales[k] > 0.0 && scales[k] < 0.5, ErrorCode::invalid_argument,
                "scales must lie in (0, 1/2)");
        if (k > 0)
            require(scales[k] < scales[k - 1], ErrorCode::invalid_argument,
                    "scales must decrease");
    }

    HolderEstimate est;
    est.scales = scales;
    est.moduli.resize(scales.size());
    for (std::size_t k = 0; k < scales.size(); ++k) {
        const double r = scales[k];
        double m = 0.0;
        for (int j = 0; j < n_angles; ++j) {
            const double th = 2.0 * M_PI * j / n_angles;
            const double v = u(r * std::cos(th), r * std::sin(th));
            m = std::max(m, std::abs(v - u_at_origin));
        }
        est.moduli[k] = m;
    }
    est.fit = fit_exponent(est.scales, est.moduli);
    est.alpha = est.fit.slope;
    return est;
}

double energy_ratio(const FemSolution& sol, const VectorField& F, int quad_order) {
    require(static_cast<bool>(F), ErrorCode::zero_rhs, "right side is empty");
    const Mesh& mesh = sol.mesh();
    double f_sq = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geom = mesh.element_geometry(t);
        const Triangle& tri = mesh.triangle(t);
        const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh.vertex(tri.v[2]).pos();
        for (const TriQuadNode& q :
             triangle_rule(mesh.touches_origin(t) ? 1 : quad_order)) {
            const Vec2 xq = barycentric_point(q, p0, p1, p2);
            f_sq += q.w * geom.area * F(xq.x, xq.y).norm2();
        }
    }
    if (f_sq == 0.0) fail(ErrorCode::zero_rhs, "||F|| vanishes on the mesh");
    return sol.gradient_l2_squared() / f_sq;
}

double caccioppoli_ratio(const FemSolution& sol, const VectorField& F, Vec2 x0,
                         double r, double s, double d_bmo, int quad_order) {
    require(r > 0.0, ErrorCode::invalid_argument, "radius must be positive");
    require(s > 1.0 && s < 2.0, ErrorCode::invalid_argument, "s must lie in (1,2)");
    const Mesh& mesh = sol.mesh();

    // Elements intersecting the r-ball (by vertex or centroid).
    int n_intersecting = 0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangle(t);
        bool hit = false;
        for (int i = 0; i < 3 && !hit; ++i)
            hit = (mesh.vertex(tri.v[i]).pos() - x0).norm() <= r;
        if (!hit) hit = (mesh.element_geometry(t).centroid - x0).norm() <= r;
        if (hit) ++n_intersecting;
    }
    if (n_intersecting < 10)
        fail(ErrorCode::region_too_small,
             "fewer than 10 elements intersect the r-ball");

    // Ball average of u; dropped (set to zero) when the ball meets the
    // complement of the polygonal domain.
    const bool ball_inside = [&] {
        if (mesh.domain() == DomainKind::square)
            return x0.x - r >= 0.0 && x0.y - r >= 0.0 && x0.x + r <= 1.0 &&
                   x0.y + r <= 1.0;
        std::size_t n_bdry = 0;
        for (const Vertex& v : mesh.vertices())
            if (v.on_boundary) ++n_bdry;
        const double n_outer =
            mesh.domain() == DomainKind::disk ? static_cast<double>(n_bdry)
                                              : static_cast<double>(n_bdry) / 2.0;
        const double inradius = std::cos(M_PI / n_outer);
        const bool inside_outer = x0.norm() + r <= inradius;
        if (mesh.domain() == DomainKind::disk) return inside_outer;
        return inside_outer && x0.norm() - r >= mesh.inner_radius();
    }();

    double mean = 0.0;
    if (ball_inside) {
        double wsum = 0.0, usum = 0.0;
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const ElementGeometry geom = mesh.element_geometry(t);
            const Triangle& tri = mesh.triangle(t);
            const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
            const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
            const Vec2 p2 = mesh.vertex(tri.v[2]).pos();
            for (const TriQuadNode& q : triangle_rule(quad_order)) {
                const Vec2 xq = barycentric_point(q, p0, p1, p2);
                if ((xq - x0).norm() > r) continue;
                const double uq = q.l0 * sol.coeffs()[tri.v[0]] +
                                  q.l1 * sol.coeffs()[tri.v[1]] +
                                  q.l2 * sol.coeffs()[tri.v[2]];
                wsum += q.w * geom.area;
                usum += q.w * geom.area * uq;
            }
        }
        require(wsum > 0.0, ErrorCode::empty_region, "r-ball contains no nodes");
        mean = usum / wsum;
    }

    const double exponent = 2.0 * s / (2.0 - s);
    const double r32 = 1.5 * r;
    double lhs = 0.0, u_term = 0.0, f_term = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const ElementGeometry geom = mesh.element_geometry(t);
        const Triangle& tri = mesh.triangle(t);
        const Vec2 p0 = mesh.vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh.vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh.vertex(tri.v[2]).pos();
        const double g2 = sol.element_gradient(t).norm2();
        for (const TriQuadNode& q :
             triangle_rule(mesh.touches_origin(t) ? 1 : quad_order)) {
            const Vec2 xq = barycentric_point(q, p0, p1, p2);
            const double dist = (xq - x0).norm();
            if (dist > r32) continue;
            const double w = q.w * geom.area;
            const double uq = q.l0 * sol.coeffs()[tri.v[0]] +
                              q.l1 * sol.coeffs()[tri.v[1]] +
                              q.l2 * sol.coeffs()[tri.v[2]];
            u_term += w * std::pow(std::abs(uq - mean), exponent);
            if (F) f_term += w * F(xq.x, xq.y).norm2();
            if (dist <= r) lhs += w * g2;
        }
    }

    // Constant solutions leave lhs at pure gradient roundoff; report 0.
    double coeff_scale = 0.0;
    for (double c : sol.coeffs()) coeff_scale = std::max(coeff_scale, std::abs(c));
    const double lhs_floor =
        1e-26 * coeff_scale * coeff_scale * mesh.total_area();
    if (lhs <= lhs_floor) return 0.0;
    const double s_prime = s / (s - 1.0);
    const double rhs = std::pow(r, 4.0 / s_prime - 2.0) * (d_bmo * d_bmo + 1.0) *
                           std::pow(u_term, (2.0 - s) / s) +
                       f_term;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

WeightedSamples samples_from_fem(const FemSolution& sol, const VectorField& F,
                                 int quad_order) {
    WeightedSamples samples;
    for_each_gradient_node(sol, quad_order, [&](Vec2 x, double w, double g) {
        samples.pts.push_back(x);
        samples.w.push_back(w);
        samples.g.push_back(g);
        samples.f.push_back(F ? F(x.x, x.y).norm() : 0.0);
    });
    return samples;
}

WeightedSamples samples_from_oracle(double mu, double cutoff, int n_radial,
                                    int n_angular) {
    require(cutoff > 0.0 && cutoff < 1.0, ErrorCode::invalid_argument,
            "cutoff must lie in (0,1)");
    const OracleSolution oracle(mu);
    WeightedSamples samples;
    const double dt = 2.0 * M_PI / n_angular;
    for (int i = 0; i < n_radial; ++i) {
        // Log-spaced band edges between the cutoff and 1.
        const double e0 = cutoff * std::pow(1.0 / cutoff, static_cast<double>(i) / n_radial);
        const double e1 =
            cutoff * std::pow(1.0 / cutoff, static_cast<double>(i + 1) / n_radial);
        const double rho = std::sqrt(e0 * e1);
        const double band_area = 0.5 * (e1 * e1 - e0 * e0) * dt;
        for (int j = 0; j < n_angular; ++j) {
            const double th = (j + 0.5) * dt;
            const Vec2 x{rho * std::cos(th), rho * std::sin(th)};
            samples.pts.push_back(x);
            samples.w.push_back(band_area);
            samples.g.push_back(oracle.gradient(x.x, x.y).norm());
            samples.f.push_back(0.0);
        }
    }
    return samples;
}

RHScanResult reverse_holder_scan(const WeightedSamples& samples,
                                 const std::vector<Vec2>& centers,
                                 const std::vector<double>& radii,
                                 const std::vector<double>& p_grid) {
    require(centers.size() == radii.size() && !centers.empty(),
            ErrorCode::invalid_argument,
            "ball family needs matched centers and radii");
    require(!p_grid.empty(), ErrorCode::invalid_argument, "empty p grid");
    const std::size_t n_samples = samples.pts.size();
    require(n_samples > 0, ErrorCode::invalid_argument, "empty sample set");

    // Sample memberships per ball.
    std::vector<std::vector<std::size_t>> members(centers.size());
    for (std::size_t b = 0; b < centers.size(); ++b) {
        for (std::size_t i = 0; i < n_samples; ++i)
            if ((samples.pts[i] - centers[b]).norm() <= radii[b])
                members[b].push_back(i);
        if (members[b].empty())
            fail(ErrorCode::empty_region, "a scan ball contains no samples");
    }

    double w_total = 0.0, g2_total = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        w_total += samples.w[i];
        g2_total += samples.w[i] * samples.g[i] * samples.g[i];
    }
    const double ref_g2 = std::sqrt(g2_total / w_total);

    RHScanResult result;
    result.p_grid = p_grid;
    result.centers = centers;
    result.radii = radii;
    result.max_ratio.assign(p_grid.size(), 0.0);
    result.argmax_ball.assign(p_grid.size(), 0);
    result.ratios.assign(p_grid.size(), std::vector<double>(centers.size(), 0.0));

    parallel_for(p_grid.size(), [&](std::size_t ip) {
        const double p = p_grid[ip];
        double fp_total = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i)
            fp_total += samples.w[i] * std::pow(samples.f[i], p);
        const double denom = ref_g2 + std::pow(fp_total / w_total, 1.0 / p);
        for (std::size_t b = 0; b < centers.size(); ++b) {
            double wsum = 0.0, gsum = 0.0;
            for (std::size_t i : members[b]) {
                wsum += samples.w[i];
                gsum += samples.w[i] * std::pow(samples.g[i], p);
            }
            result.ratios[ip][b] = std::pow(gsum / wsum, 1.0 / p) / denom;
        }
    });

    for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
        for (std::size_t b = 0; b < centers.size(); ++b) {
            if (result.ratios[ip][b] > result.max_ratio[ip]) {
                result.max_ratio[ip] = result.ratios[ip][b];
                result.argmax_ball[ip] = static_cast<int>(b);
            }
        }
    }

    // Reference value at the grid point nearest p = 2; p_star is the last
    // grid point before the 10x threshold is first exceeded.
    std::size_t i2 = 0;
    for (std::size_t ip = 1; ip < p_grid.size(); ++ip)
        if (std::abs(p_grid[ip] - 2.0) < std::abs(p_grid[i2] - 2.0)) i2 = ip;
    result.p_star = p_grid.front();
    for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
        if (result.max_ratio[ip] >= 10.0 * result.max_ratio[i2]) break;
        result.p_star = p_grid[ip];
    }
    return result;
}

} // namespace meyerslab
