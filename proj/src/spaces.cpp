#include "elastrim/spaces.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "elastrim/errors.hpp"

namespace elastrim {

namespace {

// Symmetric orbits on the reference triangle, barycentric (1-2a, a, a) and
// the 6-permutation orbit of (a, b, 1-a-b). Weights are normalized to sum
// to 1 and scaled by the reference area 1/2 on output.
struct Orbit3 {
  double a, w;
};
struct Orbit6 {
  double a, b, w;
};

void push_point(std::vector<Vec2>& pts, std::vector<double>& ws, double l1,
                double l2, double w) {
  // Barycentric (l0, l1, l2) -> reference (x, y) = (l1, l2).
  pts.emplace_back(l1, l2);
  ws.push_back(w);
}

void push_orbit3(std::vector<Vec2>& pts, std::vector<double>& ws,
                 const Orbit3& o) {
  const double b = 1.0 - 2.0 * o.a;
  push_point(pts, ws, o.a, o.a, o.w);
  push_point(pts, ws, b, o.a, o.w);
  push_point(pts, ws, o.a, b, o.w);
}

void push_orbit6(std::vector<Vec2>& pts, std::vector<double>& ws,
                 const Orbit6& o) {
  const double c = 1.0 - o.a - o.b;
  push_point(pts, ws, o.a, o.b, o.w);
  push_point(pts, ws, o.b, o.a, o.w);
  push_point(pts, ws, o.a, c, o.w);
  push_point(pts, ws, c, o.a, o.w);
  push_point(pts, ws, o.b, c, o.w);
  push_point(pts, ws, c, o.b, o.w);
}

QuadratureRule pack(const std::vector<Vec2>& pts, const std::vector<double>& ws) {
  QuadratureRule rule;
  rule.points.resize(static_cast<long>(pts.size()), 2);
  rule.weights.resize(static_cast<long>(ws.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.points.row(static_cast<long>(i)) = pts[i].transpose();
    rule.weights[static_cast<long>(i)] = 0.5 * ws[i];  // reference area 1/2
  }
  return rule;
}

// Legendre polynomial value and derivative on [-1, 1].
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule triangle_quadrature(int degree) {
  if (degree < 1 || degree > 8)
    throw std::invalid_argument("triangle quadrature supports degrees 1..8");

  std::vector<Vec2> pts;
  std::vector<double> ws;
  if (degree <= 1) {
    push_point(pts, ws, 1.0 / 3.0, 1.0 / 3.0, 1.0);
  } else if (degree <= 2) {
    push_orbit3(pts, ws, {1.0 / 6.0, 1.0 / 3.0});
  } else if (degree <= 4) {
    // Positive 6-point rule, exact to degree 4 (covers degree 3 too; the
    // classical 4-point degree-3 rule has a negative centroid weight).
    push_orbit3(pts, ws, {0.445948490915965, 0.223381589678011});
    push_orbit3(pts, ws, {0.091576213509771, 0.109951743655322});
  } else if (degree <= 5) {
    push_point(pts, ws, 1.0 / 3.0, 1.0 / 3.0, 0.225);
    push_orbit3(pts, ws, {0.470142064105115, 0.132394152788506});
    push_orbit3(pts, ws, {0.101286507323456, 0.125939180544827});
  } else if (degree <= 6) {
    push_orbit3(pts, ws, {0.249286745170910, 0.116786275726379});
    push_orbit3(pts, ws, {0.063089014491502, 0.050844906370207});
    push_orbit6(pts, ws, {0.310352451033785, 0.053145049844816,
                          0.082851075618374});
  } else {
    // Positive 16-point rule, exact to degree 8 (covers 7; the 13-point
    // degree-7 rule carries a negative weight).
    push_point(pts, ws, 1.0 / 3.0, 1.0 / 3.0, 0.1443156076777871);
    push_orbit3(pts, ws, {0.4592925882927232, 0.0950916342672846});
    push_orbit3(pts, ws, {0.1705693077517602, 0.1032173705347183});
    push_orbit3(pts, ws, {0.0505472283170310, 0.0324584976231981});
    push_orbit6(pts, ws, {0.2631128296346381, 0.0083947774099576,
                          0.0272303141744350});
  }
  return pack(pts, ws);
}

QuadratureRule segment_quadrature(int degree) {
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("segment quadrature supports degrees 1..10");
  const int n = (degree + 2) / 2;  // n-point Gauss is exact to 2n-1

  QuadratureRule rule;
  rule.points.setZero(n, 2);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    for (int it = 0; it < 60; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points(i, 0) = 0.5 * (x + 1.0);  // map [-1,1] -> [0,1]
    rule.weights[i] = 0.5 * w;
  }
  return rule;
}

const std::array<Vec2, 6>& p2_triangle_nodes() {
  static const std::array<Vec2, 6> nodes = {
      Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0),
      Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
  return nodes;
}

void p2_triangle_basis(const Vec2& ref_point, Basis6& values, Grad6& gradients) {
  const double x = ref_point.x();
  const double y = ref_point.y();
  const double l0 = 1.0 - x - y;

  values[0] = l0 * (2.0 * l0 - 1.0);
  values[1] = x * (2.0 * x - 1.0);
  values[2] = y * (2.0 * y - 1.0);
  values[3] = 4.0 * l0 * x;
  values[4] = 4.0 * x * y;
  values[5] = 4.0 * y * l0;

  gradients(0, 0) = 1.0 - 4.0 * l0;
  gradients(0, 1) = 1.0 - 4.0 * l0;
  gradients(1, 0) = 4.0 * x - 1.0;
  gradients(1, 1) = 0.0;
  gradients(2, 0) = 0.0;
  gradients(2, 1) = 4.0 * y - 1.0;
  gradients(3, 0) = 4.0 * (l0 - x);
  gradients(3, 1) = -4.0 * x;
  gradients(4, 0) = 4.0 * y;
  gradients(4, 1) = 4.0 * x;
  gradients(5, 0) = -4.0 * y;
  gradients(5, 1) = 4.0 * (l0 - y);
}

void p2_segment_basis(double t, Vec3& values, Vec3& d1, Vec3& d2) {
  values[0] = (1.0 - t) * (1.0 - 2.0 * t);
  values[1] = t * (2.0 * t - 1.0);
  values[2] = 4.0 * t * (1.0 - t);
  d1[0] = 4.0 * t - 3.0;
  d1[1] = 4.0 * t - 1.0;
  d1[2] = 4.0 - 8.0 * t;
  d2[0] = 4.0;
  d2[1] = 4.0;
  d2[2] = -8.0;
}

DofLayout build_dofmaps(const Mesh& mesh) {
  DofLayout layout;
  layout.membrane_total = 18L * mesh.n_cells();
  layout.multiplier_total = 2L * static_cast<long>(mesh.boundary_edges.size());
  return layout;
}

State zero_state(const DofLayout& layout) {
  State state;
  state.x = VecX::Zero(layout.membrane_total);
  state.l = VecX::Zero(layout.multiplier_total);
  return state;
}

Vec3 evaluate_in_cell(const State& state, const DofLayout& layout, int cell,
                      const Vec2& ref_point) {
  Basis6 n;
  Grad6 g;
  p2_triangle_basis(ref_point, n, g);
  Vec3 value = Vec3::Zero();
  for (int node = 0; node < 6; ++node)
    for (int comp = 0; comp < 3; ++comp)
      value[comp] += n[node] * state.x[layout.membrane_dof(cell, node, comp)];
  return value;
}

}  // namespace elastrim
