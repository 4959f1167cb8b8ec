#include "elastrim/boundary.hpp"

#include <cmath>

#include "elastrim/errors.hpp"

namespace elastrim {

namespace {

// 4-point Gauss on [0,1]: exact to degree 7, enough for every boundary
// integrand (the constraint term is degree 4 in t on each edge, plus the
// quadratic multiplier).
const QuadratureRule& edge_rule() {
  static const QuadratureRule rule = segment_quadrature(7);
  return rule;
}

}  // namespace

TraceBlock boundary_trace(const State& state, const Mesh& mesh,
                          const DofLayout& layout, int boundary_edge) {
  const BoundaryEdge& edge = mesh.boundary_edges[boundary_edge];
  const int k = cell_edge_index(mesh, edge);
  // Cell-local scalar nodes under the edge: t=0 vertex, t=1 vertex, midpoint.
  const int locals[3] = {k, (k + 1) % 3, 3 + k};
  TraceBlock block;
  for (int j = 0; j < 3; ++j)
    for (int comp = 0; comp < 3; ++comp)
      block(comp, j) = state.x[layout.membrane_dof(edge.cell, locals[j], comp)];
  return block;
}

TangentialDerivatives tangential_derivatives(const TraceBlock& trace,
                                             double theta_width, double t) {
  if (!(theta_width > 0.0))
    throw GeometryError("boundary edge with zero theta width");
  Vec3 n, d1, d2;
  p2_segment_basis(t, n, d1, d2);
  TangentialDerivatives out;
  out.value = trace * n;
  out.d_theta = trace * d1 / theta_width;
  out.d2_theta = trace * d2 / (theta_width * theta_width);
  return out;
}

double perimeter(const State& state, const Mesh& mesh, const DofLayout& layout) {
  const QuadratureRule& rule = edge_rule();
  double length = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.boundary_edges.size()); ++e) {
    const TraceBlock block = boundary_trace(state, mesh, layout, e);
    const double width = mesh.boundary_edges[e].theta_width();
    for (long q = 0; q < rule.weights.size(); ++q) {
      const auto d = tangential_derivatives(block, width, rule.points(q, 0));
      // |d_theta X| dtheta = |dX/dt| dt
      length += rule.weights[q] * d.d_theta.norm() * width;
    }
  }
  return length;
}

SpeedViolation unit_speed_violation(const State& state, const Mesh& mesh,
                                    const DofLayout& layout) {
  const QuadratureRule& rule = edge_rule();
  SpeedViolation out;
  double l2sq = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.boundary_edges.size()); ++e) {
    const TraceBlock block = boundary_trace(state, mesh, layout, e);
    const double width = mesh.boundary_edges[e].theta_width();
    for (long q = 0; q < rule.weights.size(); ++q) {
      const auto d = tangential_derivatives(block, width, rule.points(q, 0));
      const double speed = d.d_theta.norm();
      out.max_violation = std::max(out.max_violation, std::abs(speed - 1.0));
      const double defect = speed * speed - 1.0;
      l2sq += rule.weights[q] * width * defect * defect;
    }
  }
  out.l2_violation = std::sqrt(l2sq);
  return out;
}

}  // namespace elastrim
