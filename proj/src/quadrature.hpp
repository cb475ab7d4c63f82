// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>

#include "error.hpp"
#include "geometry.hpp"

namespace meyerslab {

/// One node of a triangle rule: barycentric coordinates plus a weight that
/// multiplies the element area.
struct TriQuadNode {
    double l0, l1, l2;
    double w;
};

/// Symmetric triangle rules keyed by point count: 1 (degree 1, centroid),
/// 3 (degree 2), 6 (degree 4).
std::span<const TriQuadNode> triangle_rule(int n_points);

inline Vec2 barycentric_point(const TriQuadNode& q, Vec2 p0, Vec2 p1, Vec2 p2) {
    return {q.l0 * p0.x + q.l1 * p1.x + q.l2 * p2.x,
            q.l0 * p0.y + q.l1 * p1.y + q.l2 * p2.y};
}

/// Composite rule for integrands with a point singularity at one triangle
/// vertex: dyadic self-similar subdivision toward `corner`, the 6-point rule
/// on each ring level, the 3-point rule on the innermost leftover triangle.
/// No node coincides with the corner; weights sum to the triangle area.
template <typename Fn>
void for_each_corner_graded_node(Vec2 corner, Vec2 p1, Vec2 p2, int levels,
                                 Fn&& fn) {
    const auto sub_triangle = [&fn](Vec2 a, Vec2 b, Vec2 c, int n_points) {
        const double area = 0.5 * (b - a).cross(c - a);
        for (const TriQuadNode& q : triangle_rule(n_points))
            fn(Vec2{q.l0 * a.x + q.l1 * b.x + q.l2 * c.x,
                    q.l0 * a.y + q.l1 * b.y + q.l2 * c.y},
               q.w * area);
    };
    Vec2 a_out = p1, b_out = p2;
    for (int k = 0; k < levels; ++k) {
        const Vec2 a_in = corner + (a_out - corner) * 0.5;
        const Vec2 b_in = corner + (b_out - corner) * 0.5;
        sub_triangle(a_in, a_out, b_out, 6);
        sub_triangle(a_in, b_out, b_in, 6);
        a_out = a_in;
        b_out = b_in;
    }
    sub_triangle(corner, a_out, b_out, 3);
}

/// Midpoint rule on a polar grid over the disk of radius `r` centered at `c`:
/// n x n nodes, none of which lies at the disk center. Weights sum to the
/// exact disk area. Calls fn(point, weight) in a fixed deterministic order.
template <typename Fn>
void for_each_polar_node(Vec2 c, double r, int n, Fn&& fn) {
    const double dr = r / n;
    const double dt = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) {
        const double rho = (i + 0.5) * dr;
        const double w = rho * dr * dt;
        for (int j = 0; j < n; ++j) {
            const double th = (j + 0.5) * dt;
            fn(Vec2{c.x + rho * std::cos(th), c.y + rho * std::sin(th)}, w);
        }
    }
}

} // namespace meyerslab
