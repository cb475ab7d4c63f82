// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace meyerslab {

struct Vertex {
    double x = 0.0;
    double y = 0.0;
    bool on_boundary = false;

    Vec2 pos() const { return {x, y}; }
};

/// Counterclockwise vertex indices.
struct Triangle {
    std::array<int, 3> v{};
};

enum class DomainKind { disk, annulus, square };

struct ElementGeometry {
    double area = 0.0;
    std::array<Vec2, 3> grad_basis{}; // constant P1 basis gradients
    Vec2 centroid{};
};

/// Conforming triangulation. Disk and annulus meshes are ring/sector grids
/// graded toward the origin (ring k sits at radius (k/K)^beta); sector lines
/// pass through both halves of the y-axis so no element interior crosses it.
/// Immutable after construction.
class Mesh {
public:
    static Mesh build_disk(int n_rings, int n_sectors, double grading);
    static Mesh build_annulus(double inner_radius, int n_rings, int n_sectors,
                              double grading);
    static Mesh build_square(int n_cells);

    /// Uniform quadrisection by edge midpoints; new boundary vertices of
    /// disk/annulus meshes are projected back to the circle.
    Mesh refine() const;

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const Vertex& vertex(int i) const { return vertices_[i]; }
    const Triangle& triangle(int t) const { return triangles_[t]; }

    double grading() const { return grading_; }
    int level() const { return level_; }
    DomainKind domain() const { return domain_; }
    double inner_radius() const { return inner_radius_; }

    ElementGeometry element_geometry(int t) const;

    double total_area() const;
    /// Area of the exact polygon the triangles should tile.
    double polygon_area() const;

    std::vector<int> boundary_vertices() const;
    std::vector<int> interior_vertices() const;

    /// True if vertex i sits at the coordinate origin.
    bool is_origin_vertex(int i) const;
    /// True if some vertex of triangle t sits at the origin.
    bool touches_origin(int t) const;

    /// Throws on any violated invariant (conformity, orientation, boundary
    /// flags, y-axis alignment, area tiling).
    void validate() const;

    /// ASCII format: "nv nt", then "x y flag" per vertex, then "i j k".
    void write(const std::string& path) const;

    /// Manual construction for tests and readers.
    Mesh(std::vector<Vertex> vertices, std::vector<Triangle> triangles,
         DomainKind domain, double grading, int level, double inner_radius = 0.0);

private:
    std::vector<Vertex> vertices_;
    std::vector<Triangle> triangles_;
    DomainKind domain_ = DomainKind::disk;
    double grading_ = 1.0;
    int level_ = 0;
    double inner_radius_ = 0.0;
};

/// Point-location accelerator over a fixed mesh (uniform bin grid).
class MeshLocator {
public:
    explicit MeshLocator(const Mesh& mesh);

    /// Triangle containing p (barycentric tolerance 1e-12), or -1.
    int locate(Vec2 p, std::array<double, 3>* bary = nullptr) const;

private:
    const Mesh* mesh_;
    double x0_, y0_, cell_;
    int nx_, ny_;
    std::vector<std::vector<int>> bins_;
};

} // namespace meyerslab
