// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "error.hpp"

namespace meyerslab {

namespace {

constexpr double kDegenerateArea = 1e-14;
constexpr double kBoundaryTol = 1e-9;

double signed_area(Vec2 a, Vec2 b, Vec2 c) {
    return 0.5 * (b - a).cross(c - a);
}

} // namespace

Mesh::Mesh(std::vector<Vertex> vertices, std::vector<Triangle> triangles,
           DomainKind domain, double grading, int level, double inner_radius)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      domain_(domain),
      grading_(grading),
      level_(level),
      inner_radius_(inner_radius) {}

Mesh Mesh::build_disk(int n_rings, int n_sectors, double grading) {
    require(n_rings >= 2, ErrorCode::invalid_argument, "n_rings must be >= 2");
    require(n_sectors >= 8, ErrorCode::invalid_argument, "n_sectors must be >= 8");
    require(n_sectors % 4 == 0, ErrorCode::invalid_argument,
            "n_sectors must be divisible by 4 so sector lines meet the y-axis");
    require(grading >= 1.0, ErrorCode::invalid_argument, "grading must be >= 1");

    std::vector<Vertex> verts;
    verts.reserve(1 + static_cast<std::size_t>(n_rings) * n_sectors);
    verts.push_back({0.0, 0.0, false});
    for (int k = 1; k <= n_rings; ++k) {
        const double r = std::pow(static_cast<double>(k) / n_rings, grading);
        const bool bdry = (k == n_rings);
        for (int j = 0; j < n_sectors; ++j) {
            const double th = 2.0 * M_PI * j / n_sectors;
            double x = r * std::cos(th);
            double y = r * std::sin(th);
            // Pin the sector lines exactly onto the axes.
            if (j % (n_sectors / 4) == 0) {
                if (j == 0) { x = r; y = 0.0; }
                else if (j == n_sectors / 4) { x = 0.0; y = r; }
                else if (j == n_sectors / 2) { x = -r; y = 0.0; }
                else { x = 0.0; y = -r; }
            }
            verts.push_back({x, y, bdry});
        }
    }

    auto ring_vertex = [n_sectors](int k, int j) {
        return 1 + (k - 1) * n_sectors + (j % n_sectors);
    };

    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(n_sectors) * (2 * n_rings - 1));
    for (int j = 0; j < n_sectors; ++j)
        tris.push_back({{0, ring_vertex(1, j), ring_vertex(1, j + 1)}});
    for (int k = 1; k < n_rings; ++k) {
        for (int j = 0; j < n_sectors; ++j) {
            const int a = ring_vertex(k, j);
            const int b = ring_vertex(k + 1, j);
            const int c = ring_vertex(k + 1, j + 1);
            const int d = ring_vertex(k, j + 1);
            tris.push_back({{a, b, c}});
            tris.push_back({{a, c, d}});
        }
    }

    return Mesh(std::move(verts), std::move(tris), DomainKind::disk, grading, 0);
}

Mesh Mesh::build_annulus(double inner_radius, int n_rings, int n_sectors,
                         double grading) {
    require(inner_radius > 0.0 && inner_radius < 1.0, ErrorCode::invalid_argument,
            "inner radius must lie in (0, 1)");
    require(n_rings >= 1, ErrorCode::invalid_argument, "n_rings must be >= 1");
    require(n_sectors >= 8 && n_sectors % 4 == 0, ErrorCode::invalid_argument,
            "n_sectors must be >= 8 and divisible by 4");
    require(grading >= 1.0, ErrorCode::invalid_argument, "grading must be >= 1");

    std::vector<Vertex> verts;
    verts.reserve(static_cast<std::size_t>(n_rings + 1) * n_sectors);
    for (int k = 0; k <= n_rings; ++k) {
        const double t = std::pow(static_cast<double>(k) / n_rings, grading);
        const double r = inner_radius + (1.0 - inner_radius) * t;
        const bool bdry = (k == 0 || k == n_rings);
        for (int j = 0; j < n_sectors; ++j) {
            const double th = 2.0 * M_PI * j / n_sectors;
            double x = r * std::cos(th);
            double y = r * std::sin(th);
            if (j % (n_sectors / 4) == 0) {
                if (j == 0) { x = r; y = 0.0; }
                else if (j == n_sectors / 4) { x = 0.0; y = r; }
                else if (j == n_sectors / 2) { x = -r; y = 0.0; }
                else { x = 0.0; y = -r; }
            }
            verts.push_back({x, y, bdry});
        }
    }

    auto at = [n_sectors](int k, int j) { return k * n_sectors + (j % n_sectors); };

    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(2 * n_rings) * n_sectors);
    for (int k = 0; k < n_rings; ++k) {
        for (int j = 0; j < n_sectors; ++j) {
            const int a = at(k, j);
            const int b = at(k + 1, j);
            const int c = at(k + 1, j + 1);
            const int d = at(k, j + 1);
            tris.push_back({{a, b, c}});
            tris.push_back({{a, c, d}});
        }
    }

    return Mesh(std::move(verts), std::move(tris), DomainKind::annulus, grading, 0,
                inner_radius);
}

Mesh Mesh::build_square(int n_cells) {
    require(n_cells >= 1, ErrorCode::invalid_argument, "n_cells must be >= 1");
    const int n = n_cells + 1;
    std::vector<Vertex> verts;
    verts.reserve(static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double x = static_cast<double>(ix) / n_cells;
            const double y = static_cast<double>(iy) / n_cells;
            const bool bdry = (ix == 0 || iy == 0 || ix == n_cells || iy == n_cells);
            verts.push_back({x, y, bdry});
        }
    }
    auto at = [n](int ix, int iy) { return iy * n + ix; };
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(2 * n_cells) * n_cells);
    for (int iy = 0; iy < n_cells; ++iy) {
        for (int ix = 0; ix < n_cells; ++ix) {
            const int a = at(ix, iy);
            const int b = at(ix + 1, iy);
            const int c = at(ix + 1, iy + 1);
            const int d = at(ix, iy + 1);
            tris.push_back({{a, b, c}});
            tris.push_back({{a, c, d}});
        }
    }
    return Mesh(std::move(verts), std::move(tris), DomainKind::square, 1.0, 0);
}

Mesh Mesh::refine() const {
    std::vector<Vertex> verts = vertices_;
    std::map<std::pair<int, int>, int> midpoint;

    // Count triangles per edge so we can tell boundary edges apart.
    std::map<std::pair<int, int>, int> edge_count;
    for (const Triangle& t : triangles_) {
        for (int e = 0; e < 3; ++e) {
            const int a = t.v[e];
            const int b = t.v[(e + 1) % 3];
            edge_count[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }

    auto circle_project = [this](Vec2 p, const Vertex& va, const Vertex& vb) {
        const double ra = va.pos().norm();
        const double rb = vb.pos().norm();
        const double target = 0.5 * (ra + rb);
        const double n = p.norm();
        if (n == 0.0) return p;
        return p * (target / n);
    };

    auto mid = [&](int a, int b) {
        const auto key = std::make_pair(std::min(a, b), std::max(a, b));
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const Vertex& va = vertices_[a];
        const Vertex& vb = vertices_[b];
        Vec2 p{0.5 * (va.x + vb.x), 0.5 * (va.y + vb.y)};
        const bool boundary_edge =
            va.on_boundary && vb.on_boundary && edge_count[key] == 1;
        if (boundary_edge && domain_ != DomainKind::square)
            p = circle_project(p, va, vb);
        const int idx = static_cast<int>(verts.size());
        verts.push_back({p.x, p.y, boundary_edge});
        midpoint.emplace(key, idx);
        return idx;
    };

    std::vector<Triangle> tris;
    tris.reserve(triangles_.size() * 4);
    for (const Triangle& t : triangles_) {
        const int a = t.v[0], b = t.v[1], c = t.v[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        tris.push_back({{a, ab, ca}});
        tris.push_back({{ab, b, bc}});
        tris.push_back({{ca, bc, c}});
        tris.push_back({{ab, bc, ca}});
    }

    return Mesh(std::move(verts), std::move(tris), domain_, grading_, level_ + 1,
                inner_radius_);
}

ElementGeometry Mesh::element_geometry(int t) const {
    require(t >= 0 && t < num_triangles(), ErrorCode::invalid_argument,
            "triangle index out of range");
    const Triangle& tri = triangles_[t];
    const Vec2 p0 = vertices_[tri.v[0]].pos();
    const Vec2 p1 = vertices_[tri.v[1]].pos();
    const Vec2 p2 = vertices_[tri.v[2]].pos();
    const double area = signed_area(p0, p1, p2);
    if (area <= kDegenerateArea)
        fail(ErrorCode::degenerate_element, "triangle area below 1e-14");
    ElementGeometry g;
    g.area = area;
    const double inv = 1.0 / (2.0 * area);
    g.grad_basis[0] = (p2 - p1).perp() * inv;
    g.grad_basis[1] = (p0 - p2).perp() * inv;
    g.grad_basis[2] = (p1 - p0).perp() * inv;
    g.centroid = (p0 + p1 + p2) / 3.0;
    return g;
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (int t = 0; t < num_triangles(); ++t) {
        const Triangle& tri = triangles_[t];
        sum += signed_area(vertices_[tri.v[0]].pos(), vertices_[tri.v[1]].pos(),
                           vertices_[tri.v[2]].pos());
    }
    return sum;
}

double Mesh::polygon_area() const {
    // All boundary polygons here are inscribed regular n-gons (or the square).
    std::size_t n_bdry = 0;
    for (const Vertex& v : vertices_)
        if (v.on_boundary) ++n_bdry;
    switch (domain_) {
        case DomainKind::square:
            return 1.0;
        case DomainKind::disk: {
            const double n = static_cast<double>(n_bdry);
            return 0.5 * n * std::sin(2.0 * M_PI / n);
        }
        case DomainKind::annulus: {
            const double n = static_cast<double>(n_bdry) / 2.0;
            const double outer = 0.5 * n * std::sin(2.0 * M_PI / n);
            return outer * (1.0 - inner_radius_ * inner_radius_);
        }
    }
    return 0.0;
}

std::vector<int> Mesh::boundary_vertices() const {
    std::vector<int> out;
    for (int i = 0; i < num_vertices(); ++i)
        if (vertices_[i].on_boundary) out.push_back(i);
    return out;
}

std::vector<int> Mesh::interior_vertices() const {
    std::vector<int> out;
    for (int i = 0; i < num_vertices(); ++i)
        if (!vertices_[i].on_boundary) out.push_back(i);
    return out;
}

bool Mesh::is_origin_vertex(int i) const {
    const Vertex& v = vertices_[i];
    return v.x == 0.0 && v.y == 0.0;
}

bool Mesh::touches_origin(int t) const {
    const Triangle& tri = triangles_[t];
    return is_origin_vertex(tri.v[0]) || is_origin_vertex(tri.v[1]) ||
           is_origin_vertex(tri.v[2]);
}

void Mesh::validate() const {
    require(num_vertices() >= 3 && num_triangles() >= 1, ErrorCode::invalid_argument,
            "mesh is empty");

    for (int t = 0; t < num_triangles(); ++t) {
        const Triangle& tri = triangles_[t];
        for (int v : tri.v)
            require(v >= 0 && v < num_vertices(), ErrorCode::invalid_argument,
                    "triangle vertex index out of range");
        const double area = signed_area(vertices_[tri.v[0]].pos(),
                                        vertices_[tri.v[1]].pos(),
                                        vertices_[tri.v[2]].pos());
        require(area > 0.0, ErrorCode::invalid_argument,
                "triangle is degenerate or clockwise");

        // No element may straddle the y-axis.
        const double x0 = vertices_[tri.v[0]].x;
        const double x1 = vertices_[tri.v[1]].x;
        const double x2 = vertices_[tri.v[2]].x;
        const bool all_nonneg = x0 >= 0.0 && x1 >= 0.0 && x2 >= 0.0;
        const bool all_nonpos = x0 <= 0.0 && x1 <= 0.0 && x2 <= 0.0;
        require(all_nonneg || all_nonpos, ErrorCode::invalid_argument,
                "triangle straddles the y-axis");
    }

    // Conformity: interior edges shared by 2 triangles, boundary edges by 1.
    std::map<std::pair<int, int>, int> edge_count;
    for (const Triangle& tri : triangles_) {
        for (int e = 0; e < 3; ++e) {
            const int a = tri.v[e];
            const int b = tri.v[(e + 1) % 3];
            edge_count[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }
    std::vector<bool> on_boundary_edge(num_vertices(), false);
    for (const auto& [edge, count] : edge_count) {
        require(count == 1 || count == 2, ErrorCode::invalid_argument,
                "edge shared by more than two triangles");
        if (count == 1) {
            require(vertices_[edge.first].on_boundary &&
                        vertices_[edge.second].on_boundary,
                    ErrorCode::invalid_argument,
                    "boundary edge with interior-flagged vertex");
            on_boundary_edge[edge.first] = true;
            on_boundary_edge[edge.second] = true;
        }
    }
    for (int i = 0; i < num_vertices(); ++i)
        require(vertices_[i].on_boundary == on_boundary_edge[i],
                ErrorCode::invalid_argument, "boundary flag inconsistent");

    if (domain_ == DomainKind::disk) {
        for (const Vertex& v : vertices_) {
            const double r2 = v.x * v.x + v.y * v.y;
            require(r2 <= 1.0 + 1e-12, ErrorCode::invalid_argument,
                    "disk vertex outside the unit disk");
            require(v.on_boundary == (std::abs(r2 - 1.0) <= kBoundaryTol),
                    ErrorCode::invalid_argument,
                    "disk boundary flag inconsistent with radius");
        }
    }

    require(std::abs(total_area() - polygon_area()) <= 1e-9,
            ErrorCode::invalid_argument, "triangle areas do not tile the domain");
}

void Mesh::write(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) fail(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
    std::fprintf(f, "%d %d\n", num_vertices(), num_triangles());
    for (const Vertex& v : vertices_)
        std::fprintf(f, "%.17g %.17g %d\n", v.x, v.y, v.on_boundary ? 1 : 0);
    for (const Triangle& t : triangles_)
        std::fprintf(f, "%d %d %d\n", t.v[0], t.v[1], t.v[2]);
    std::fclose(f);
}

MeshLocator::MeshLocator(const Mesh& mesh) : mesh_(&mesh) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Vertex& v : mesh.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    const int target = std::max(1, static_cast<int>(
        std::sqrt(static_cast<double>(mesh.num_triangles()) / 2.0)));
    nx_ = ny_ = target;
    const double pad = 1e-12 + 1e-12 * std::max(xmax - xmin, ymax - ymin);
    x0_ = xmin - pad;
    y0_ = ymin - pad;
    cell_ = std::max((xmax - xmin) + 2 * pad, (ymax - ymin) + 2 * pad) /
            std::max(nx_, 1);
    if (cell_ <= 0.0) cell_ = 1.0;
    bins_.resize(static_cast<std::size_t>(nx_) * ny_);

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangle(t);
        double txmin = 1e300, txmax = -1e300, tymin = 1e300, tymax = -1e300;
        for (int v : tri.v) {
            txmin = std::min(txmin, mesh.vertex(v).x);
            txmax = std::max(txmax, mesh.vertex(v).x);
            tymin = std::min(tymin, mesh.vertex(v).y);
            tymax = std::max(tymax, mesh.vertex(v).y);
        }
        const int ix0 = std::clamp(static_cast<int>((txmin - x0_) / cell_), 0, nx_ - 1);
        const int ix1 = std::clamp(static_cast<int>((txmax - x0_) / cell_), 0, nx_ - 1);
        const int iy0 = std::clamp(static_cast<int>((tymin - y0_) / cell_), 0, ny_ - 1);
        const int iy1 = std::clamp(static_cast<int>((tymax - y0_) / cell_), 0, ny_ - 1);
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                bins_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(t);
    }
}

int MeshLocator::locate(Vec2 p, std::array<double, 3>* bary) const {
    const int ix = static_cast<int>((p.x - x0_) / cell_);
    const int iy = static_cast<int>((p.y - y0_) / cell_);
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return -1;
    constexpr double tol = 1e-12;
    for (int t : bins_[static_cast<std::size_t>(iy) * nx_ + ix]) {
        const Triangle& tri = mesh_->triangle(t);
        const Vec2 p0 = mesh_->vertex(tri.v[0]).pos();
        const Vec2 p1 = mesh_->vertex(tri.v[1]).pos();
        const Vec2 p2 = mesh_->vertex(tri.v[2]).pos();
        const double a = signed_area(p0, p1, p2);
        if (a <= 0.0) continue;
        const double l0 = signed_area(p, p1, p2) / a;
        const double l1 = signed_area(p0, p, p2) / a;
        const double l2 = signed_area(p0, p1, p) / a;
        if (l0 >= -tol && l1 >= -tol && l2 >= -tol) {
            if (bary) *bary = {l0, l1, l2};
            return t;
        }
    }
    return -1;
}

} // namespace meyerslab
