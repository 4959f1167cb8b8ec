#pragma once

#include <vector>

#include "elastrim/mesh.hpp"
#include "elastrim/spaces.hpp"
#include "elastrim/types.hpp"

namespace elastrim {

// Trace of the owning cell's polynomial on one boundary edge: rows are the
// 3 ambient components, columns the 3 segment nodes (t=0, t=1, t=1/2).
using TraceBlock = Eigen::Matrix3d;

struct TangentialDerivatives {
  Vec3 value;
  Vec3 d_theta;
  Vec3 d2_theta;  // constant in t on each edge
};

TraceBlock boundary_trace(const State& state, const Mesh& mesh,
                          const DofLayout& layout, int boundary_edge);

// Pullback chain rule for the affine edge parametrization
// theta(t) = theta1 + t * (theta2 - theta1):
//   d_theta = (d/dt) / dtheta,  d2_theta = (d^2/dt^2) / dtheta^2.
// Throws GeometryError for a zero theta-width edge.
TangentialDerivatives tangential_derivatives(const TraceBlock& trace,
                                             double theta_width, double t);

// Integral of |d_theta X| over the boundary, i.e. the length of the trace
// curve; computed edgewise with Gauss quadrature.
double perimeter(const State& state, const Mesh& mesh, const DofLayout& layout);

struct SpeedViolation {
  double max_violation = 0.0;  // max over quadrature points of ||d_theta X| - 1|
  double l2_violation = 0.0;   // L2 norm of |d_theta X|^2 - 1 over the boundary
};

SpeedViolation unit_speed_violation(const State& state, const Mesh& mesh,
                                    const DofLayout& layout);

}  // namespace elastrim
