#pragma once

#include <array>
#include <string>
#include <vector>

#include "elastrim/types.hpp"

namespace elastrim {

// Interior edge shared by exactly two triangles. `endpoints` are ordered as
// traversed counterclockwise inside `cell_plus`, so `normal` (the -90 degree
// rotation of the endpoint difference) points out of `cell_plus`. The plus
// side is the cell that contains the directed edge (min index -> max index),
// which makes the pair independent of the triangle input order.
struct InteriorEdge {
  int cell_plus = -1;
  int cell_minus = -1;
  std::array<int, 2> endpoints{-1, -1};
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
};

// Boundary edge owned by a single triangle. Endpoints are ordered
// counterclockwise around the loop; (theta1, theta2) is the unwrapped angular
// range of the endpoints, theta2 > theta1, with the wraparound edge crossing
// theta0 + 2*pi.
struct BoundaryEdge {
  int cell = -1;
  std::array<int, 2> endpoints{-1, -1};
  double theta1 = 0.0;
  double theta2 = 0.0;
  Vec2 outward_normal = Vec2::Zero();
  double length = 0.0;

  double theta_width() const { return theta2 - theta1; }
  Vec2 midpoint(const std::vector<Vec2>& vertices) const {
    return 0.5 * (vertices[endpoints[0]] + vertices[endpoints[1]]);
  }
};

// Triangulation of the unit disc. Immutable after construction; all derived
// topology (interior edges, the ordered boundary loop) is rebuilt from cell
// connectivity alone, never from file tags.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<InteriorEdge> interior_edges;
  std::vector<BoundaryEdge> boundary_edges;  // ordered ccw around the loop

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(triangles.size()); }
  int n_edges() const {
    return static_cast<int>(interior_edges.size() + boundary_edges.size());
  }

  double signed_area(int cell) const {
    const auto& t = triangles[cell];
    const Vec2 a = vertices[t[1]] - vertices[t[0]];
    const Vec2 b = vertices[t[2]] - vertices[t[0]];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
  }

  // Affine map from the reference triangle {x,y >= 0, x+y <= 1}:
  // p = v0 + J * [x, y]^T.
  Mat2 cell_jacobian(int cell) const {
    const auto& t = triangles[cell];
    Mat2 J;
    J.col(0) = vertices[t[1]] - vertices[t[0]];
    J.col(1) = vertices[t[2]] - vertices[t[0]];
    return J;
  }

  Vec2 reference_coordinates(int cell, const Vec2& p) const {
    return cell_jacobian(cell).inverse() * (p - vertices[triangles[cell][0]]);
  }

  Vec2 physical_point(int cell, const Vec2& ref) const {
    return vertices[triangles[cell][0]] + cell_jacobian(cell) * ref;
  }

  double area() const;
};

// Builds a validated Mesh from raw vertices and triangles: reorients cells
// counterclockwise, rebuilds edge topology, projects boundary vertices onto
// the unit circle (rejecting any farther than 1e-6 from it), orders the
// boundary loop, and checks every invariant (Euler relation, positive areas,
// manifold edges, single closed loop, boundary on the circle).
Mesh make_mesh(std::vector<Vec2> vertices,
               std::vector<std::array<int, 3>> triangles);

// Built-in disc mesher: concentric vertex rings with linear size grading
// between the boundary spacing 2*pi/n_boundary and that spacing divided by
// refinement_ratio at the origin, zipper-triangulated ring to ring.
// Boundary vertices sit exactly at angles 2*pi*k/n_boundary.
Mesh generate_disc_mesh(int n_boundary, double refinement_ratio);

// The counterclockwise boundary loop with unwrapped theta ranges; the ranges
// partition [theta0, theta0 + 2*pi).
const std::vector<BoundaryEdge>& boundary_loop(const Mesh& mesh);

// Local position of a boundary edge inside its owning cell: which of the
// directed cell edges (0-1, 1-2, 2-0) it is. Needed to pull cell coefficients
// onto the edge.
int cell_edge_index(const Mesh& mesh, const BoundaryEdge& edge);

}  // namespace elastrim
