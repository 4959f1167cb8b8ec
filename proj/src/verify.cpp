#include "elastrim/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace elastrim {

namespace {

// Proper 2D segment intersection with an exclusion margin so shared
// endpoints of adjacent polyline segments do not count.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c,
                    const Vec2& d) {
  const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) -
           (q.y() - p.y()) * (r.x() - p.x());
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) &&
         o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0;
}

}  // namespace

std::vector<Vec3> boundary_samples(const State& state, const Mesh& mesh,
                                   const DofLayout& layout) {
  std::vector<Vec3> samples;
  samples.reserve(2 * mesh.boundary_edges.size());
  for (int be = 0; be < static_cast<int>(mesh.boundary_edges.size()); ++be) {
    const TraceBlock block = boundary_trace(state, mesh, layout, be);
    samples.push_back(block.col(0));  // t = 0
    samples.push_back(block.col(2));  // t = 1/2
  }
  return samples;
}

bool constraints_pass(const ShapeReport& report) {
  return std::abs(report.perimeter - 2.0 * std::numbers::pi) <=
             kPerimeterTolerance &&
         report.max_speed_violation < kSpeedTolerance;
}

ShapeReport constraint_report(const State& state, const Problem& /*problem*/,
                              const Mesh& mesh, const DofLayout& layout) {
  ShapeReport report;
  report.perimeter = perimeter(state, mesh, layout);
  report.max_speed_violation =
      unit_speed_violation(state, mesh, layout).max_violation;

  const std::vector<Vec3> pts = boundary_samples(state, mesh, layout);
  const long n = static_cast<long>(pts.size());
  if (n == 0) return report;

  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : pts) centroid += p;
  centroid /= static_cast<double>(n);

  double mean_dist = 0.0;
  for (const Vec3& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(n);
  double var = 0.0;
  for (const Vec3& p : pts) {
    const double d = (p - centroid).norm() - mean_dist;
    var += d * d;
  }
  report.circularity = std::sqrt(var / static_cast<double>(n));

  // Least-squares plane through the boundary cloud: normal is the
  // eigenvector of the smallest covariance eigenvalue.
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : pts) {
    const Vec3 d = p - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Vec3 normal = eig.eigenvectors().col(0);
  int imax = 0;
  normal.cwiseAbs().maxCoeff(&imax);
  if (normal[imax] < 0.0) normal = -normal;  // deterministic sign
  report.plane_normal = normal;
  report.plane_offset = std::abs(centroid.dot(normal));

  double planarity = 0.0;
  for (const Vec3& p : pts)
    planarity = std::max(planarity, std::abs((p - centroid).dot(normal)));
  report.planarity = planarity;

  // Self-intersection proxy: project the closed polyline into the plane and
  // test all non-adjacent segment pairs.
  Vec3 u = normal.unitOrthogonal();
  Vec3 v = normal.cross(u);
  std::vector<Vec2> flat(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = pts[i] - centroid;
    flat[i] = Vec2(d.dot(u), d.dot(v));
  }
  const int m = static_cast<int>(flat.size());
  for (int i = 0; i < m && !report.self_intersection_hint; ++i) {
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // closing segment adjacency
      if (segments_cross(flat[i], flat[(i + 1) % m], flat[j],
                         flat[(j + 1) % m])) {
        report.self_intersection_hint = true;
        break;
      }
    }
  }
  return report;
}

double fd_gradient_check(const State& state, const Problem& problem,
                         const Mesh& mesh, const DofLayout& layout, double h,
                         int min_coords, unsigned seed) {
  const VecX analytic = residual(state, problem, mesh, layout);
  const long total = layout.total();
  const long count = std::min<long>(total, min_coords);

  // Random coordinate subset spanning both blocks.
  std::mt19937 rng(seed);
  std::vector<long> coords;
  coords.reserve(count);
  if (count >= total) {
    for (long i = 0; i < total; ++i) coords.push_back(i);
  } else {
    const long from_l =
        std::max<long>(1, count * layout.multiplier_total / total + 1);
    std::uniform_int_distribution<long> dx(0, layout.membrane_total - 1);
    std::uniform_int_distribution<long> dl(layout.membrane_total, total - 1);
    for (long i = 0; i < count - from_l; ++i) coords.push_back(dx(rng));
    for (long i = 0; i < from_l; ++i) coords.push_back(dl(rng));
  }

  const double floor = 1e-6 * (1.0 + analytic.cwiseAbs().maxCoeff());
  double worst = 0.0;
  State perturbed = state;
  const auto energy_at = [&](long dof, double delta) {
    double* slot = dof < layout.membrane_total
                       ? &perturbed.x[dof]
                       : &perturbed.l[dof - layout.membrane_total];
    const double saved = *slot;
    *slot = saved + delta;
    const double value =
        augmented_energy(perturbed, problem, mesh, layout).total;
    *slot = saved;
    return value;
  };
  for (const long dof : coords) {
    const double fd = (energy_at(dof, h) - energy_at(dof, -h)) / (2.0 * h);
    const double an = analytic[dof];
    const double err =
        std::abs(fd - an) / std::max({std::abs(an), std::abs(fd), floor});
    worst = std::max(worst, err);
  }
  return worst;
}

TractionProfile traction_profile(const State& state, const Problem& problem,
                                 const Mesh& mesh, const DofLayout& layout) {
  static const QuadratureRule rule = segment_quadrature(7);
  TractionProfile profile;
  Vec3 F = Vec3::Zero();
  if (mesh.boundary_edges.empty()) return profile;
  profile.samples.emplace_back(mesh.boundary_edges.front().theta1, F);

  for (int be = 0; be < static_cast<int>(mesh.boundary_edges.size()); ++be) {
    const BoundaryEdge& edge = mesh.boundary_edges[be];
    const Vec2 a = mesh.vertices[edge.endpoints[0]];
    const Vec2 b = mesh.vertices[edge.endpoints[1]];
    const Mat2 jac = mesh.cell_jacobian(edge.cell);
    const Mat2 inv = jac.inverse();
    const Vec2 v0 = mesh.vertices[mesh.triangles[edge.cell][0]];
    for (long q = 0; q < rule.weights.size(); ++q) {
      const double t = rule.points(q, 0);
      const Vec2 p = (1.0 - t) * a + t * b;
      Basis6 n;
      Grad6 ref_grad;
      p2_triangle_basis(inv * (p - v0), n, ref_grad);
      const Grad6 grad = ref_grad * inv;  // rows times J^{-1}
      Mat32 G = Mat32::Zero();
      for (int node = 0; node < 6; ++node)
        for (int comp = 0; comp < 3; ++comp)
          G.row(comp) +=
              state.x[layout.membrane_dof(edge.cell, node, comp)] *
              grad.row(node);
      // Physical arclength measure: the flux sums telescopically to zero
      // around the loop for constant stress.
      F += rule.weights[q] * edge.length *
           (problem.tensor.apply(p, G) * edge.outward_normal);
    }
    profile.samples.emplace_back(edge.theta2, F);
  }
  return profile;
}

}  // namespace elastrim
