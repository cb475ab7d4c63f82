// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace meyerslab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// 2x2 matrix in row-major order.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
};

} // namespace meyerslab
