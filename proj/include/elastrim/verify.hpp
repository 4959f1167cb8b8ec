#pragma once

#include <utility>
#include <vector>

#include "elastrim/boundary.hpp"
#include "elastrim/forms.hpp"

namespace elastrim {

// Post-hoc diagnostics of the boundary curve.
//   circularity: standard deviation of boundary distance to the boundary
//                centroid;
//   planarity:   max distance of boundary points to their least-squares
//                plane;
//   plane_offset: distance from the origin to that plane;
//   self_intersection_hint: non-adjacent segment pairs of the boundary
//                polyline intersect when projected into the best-fit plane.
struct ShapeReport {
  double perimeter = 0.0;
  double max_speed_violation = 0.0;
  double circularity = 0.0;
  double planarity = 0.0;
  double plane_offset = 0.0;
  Vec3 plane_normal = Vec3::UnitZ();
  bool self_intersection_hint = false;
};

// Default acceptance thresholds for a converged run ("close to 2*pi" and
// "close to one" made concrete; labeled as artifact defaults in output).
inline constexpr double kPerimeterTolerance = 1e-3;
inline constexpr double kSpeedTolerance = 1e-2;

bool constraints_pass(const ShapeReport& report);

// Boundary trace sampled at t = 0 and t = 1/2 of every edge, ordered
// counterclockwise around the loop.
std::vector<Vec3> boundary_samples(const State& state, const Mesh& mesh,
                                   const DofLayout& layout);

ShapeReport constraint_report(const State& state, const Problem& problem,
                              const Mesh& mesh, const DofLayout& layout);

// Central-difference oracle for the residual: compares residual entries to
// finite differences of the augmented energy over a random subset of at
// least min_coords coordinates spanning both blocks. Errors are relative to
// max(|analytic|, |fd|) with an absolute floor of 1e-6 * (1 + max |entry|),
// which guards 0/0 coordinates.
double fd_gradient_check(const State& state, const Problem& problem,
                         const Mesh& mesh, const DofLayout& layout, double h,
                         int min_coords = 100, unsigned seed = 7u);

// Cumulative boundary traction F(theta) = int_0^theta (C grad X) nu ds,
// accumulated edge by edge in theta order from the loop's first edge; one
// sample per edge endpoint, starting at (theta0, 0).
struct TractionProfile {
  std::vector<std::pair<double, Vec3>> samples;
};

TractionProfile traction_profile(const State& state, const Problem& problem,
                                 const Mesh& mesh, const DofLayout& layout);

}  // namespace elastrim
