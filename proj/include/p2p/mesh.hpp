#pragma once

#include "p2p/types.hpp"

#include <array>
#include <vector>

namespace p2p {

/// Boundary segment labels of the rectangle (-lx,lx)x(-ly,ly).
enum Segment : int { bottom = 1, right = 2, top = 3, left = 4 };

struct BoundaryEdge {
    std::array<int, 2> nodes;  // counterclockwise along the boundary
    int segment;
    std::array<double, 2> s;   // arclength positions of the nodes within the segment
};

/// Structured P1 triangulation of an axis-aligned rectangle.
///
/// Nodes are stored row-major (y outer, x inner); node (i, j) has index
/// j*(nx+1)+i. Every grid cell is split along its lower-left to upper-right
/// diagonal. Boundary edges run counterclockwise starting at the bottom-left
/// corner.
struct Mesh {
    std::vector<std::array<double, 2>> points;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> region;
    std::vector<BoundaryEdge> edges;
    double lx = 0, ly = 0;
    int nx = 0, ny = 0;

    int np() const { return static_cast<int>(points.size()); }
    int nt() const { return static_cast<int>(triangles.size()); }

    /// Signed area of triangle t (positive for counterclockwise vertices).
    double area(int t) const;
    double total_area() const;
    int node(int i, int j) const { return j * (nx + 1) + i; }
};

Mesh build_rect_mesh(double lx, double ly, int nx, int ny);

/// Per-triangle vertex means of a component-blocked nodal field.
/// Returns neq*nt values, again component-blocked.
Vec node_to_triangle(const Mesh& mesh, const Vec& v, int neq);

} // namespace p2p
