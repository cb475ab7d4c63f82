// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "quadrature.hpp"

namespace meyerslab {

namespace {

constexpr TriQuadNode kCentroid[1] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0},
};

// Degree-2 symmetric rule, interior points.
constexpr TriQuadNode kThreePoint[3] = {
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
};

// Degree-4 (Dunavant) rule.
constexpr double kA1 = 0.445948490915965;
constexpr double kW1 = 0.223381589678011;
constexpr double kA2 = 0.091576213509771;
constexpr double kW2 = 0.109951743655322;
constexpr TriQuadNode kSixPoint[6] = {
    {1.0 - 2.0 * kA1, kA1, kA1, kW1},
    {kA1, 1.0 - 2.0 * kA1, kA1, kW1},
    {kA1, kA1, 1.0 - 2.0 * kA1, kW1},
    {1.0 - 2.0 * kA2, kA2, kA2, kW2},
    {kA2, 1.0 - 2.0 * kA2, kA2, kW2},
    {kA2, kA2, 1.0 - 2.0 * kA2, kW2},
};

} // namespace

std::span<const TriQuadNode> triangle_rule(int n_points) {
    switch (n_points) {
        case 1: return kCentroid;
        case 3: return kThreePoint;
        case 6: return kSixPoint;
        default:
            fail(ErrorCode::invalid_argument,
                 "triangle quadrature order must be one of {1, 3, 6}");
    }
}

} // namespace meyerslab
