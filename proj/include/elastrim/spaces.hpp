#pragma once

#include <array>

#include "elastrim/mesh.hpp"
#include "elastrim/types.hpp"

namespace elastrim {

struct QuadratureRule {
  // One row per point; segment rules use column 0 only.
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  VecX weights;  // positive, summing to the reference measure
};

// Symmetric positive-weight rules on the reference triangle
// {x,y >= 0, x+y <= 1}; exact for total degree <= degree, weights sum to 1/2.
// Supported degrees: 1..8.
QuadratureRule triangle_quadrature(int degree);

// Gauss-Legendre on [0,1], exact to the requested degree, weights sum to 1.
// Supported degrees: 1..10.
QuadratureRule segment_quadrature(int degree);

using Basis6 = Eigen::Matrix<double, 6, 1>;
using Grad6 = Eigen::Matrix<double, 6, 2>;

// Reference nodes of the quadratic triangle: vertices first, then the edge
// midpoints of (0-1), (1-2), (2-0). This matches VTK's quadratic triangle.
const std::array<Vec2, 6>& p2_triangle_nodes();

// Standard 6-node quadratic Lagrange basis and reference gradients. Points
// outside the closed reference triangle are extrapolated polynomially.
void p2_triangle_basis(const Vec2& ref_point, Basis6& values, Grad6& gradients);

// Quadratic Lagrange basis on [0,1] with nodes {0, 1, 1/2}; second
// derivatives are constant in t.
void p2_segment_basis(double t, Vec3& values, Vec3& d1, Vec3& d2);

// Degrees of freedom.
//
// Membrane: degree-2 discontinuous vector space, 18 DOFs per cell. Local DOFs
// are grouped per scalar node with the 3 ambient components consecutive:
// local = 3*node + component, global = 18*cell + local. Cells share nothing.
//
// Multiplier: degree-2 continuous scalar space on the boundary loop. Global
// index follows the counterclockwise loop: edge k owns vertex DOF 2k (its
// t=0 endpoint) and midpoint DOF 2k+1; its t=1 endpoint is edge k+1's vertex
// DOF (wrapping). Multiplier indices are offsets into the multiplier block;
// in assembled vectors they live at membrane_total + index.
struct DofLayout {
  int membrane_dofs_per_cell = 18;
  long membrane_total = 0;
  long multiplier_total = 0;

  long cell_to_global(int cell, int local) const {
    return static_cast<long>(membrane_dofs_per_cell) * cell + local;
  }
  long membrane_dof(int cell, int node, int component) const {
    return cell_to_global(cell, 3 * node + component);
  }
  // local: 0 -> t=0 endpoint, 1 -> t=1 endpoint, 2 -> midpoint.
  long boundary_to_global(int boundary_edge, int local) const {
    const long n = multiplier_total;
    const long base = 2L * boundary_edge;
    if (local == 0) return base;
    if (local == 1) return (base + 2) % n;
    return base + 1;
  }
  long total() const { return membrane_total + multiplier_total; }
};

DofLayout build_dofmaps(const Mesh& mesh);

// Membrane coefficient vector x plus boundary multiplier vector l.
struct State {
  VecX x;
  VecX l;
};

State zero_state(const DofLayout& layout);

// Evaluates the membrane field of one cell at a reference point.
Vec3 evaluate_in_cell(const State& state, const DofLayout& layout, int cell,
                      const Vec2& ref_point);

}  // namespace elastrim
