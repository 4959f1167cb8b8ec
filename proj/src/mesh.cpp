#include "elastrim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "elastrim/errors.hpp"

namespace elastrim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCircleSnapTol = 1e-6;  // projection window onto |p| = 1
// Hard cap on the angular width of one boundary edge: the ccw unwrap is
// ambiguous from pi on. Production meshes stay below pi/4 (the mesher's
// n_boundary >= 8 guarantees it); coarse hand-made fans up to pi/2 remain
// usable for the topology checks.
constexpr double kMaxEdgeWidth = std::numbers::pi * (1.0 - 1e-9);

double wrap_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  return theta;
}

Vec2 edge_normal(const Vec2& a, const Vec2& b) {
  const Vec2 t = (b - a).normalized();
  return Vec2(t.y(), -t.x());  // -90 degree rotation: outward for ccw cells
}

struct EdgeUse {
  int cell = -1;
  bool forward = false;  // directed edge (min,max) appears in this cell
};

}  // namespace

double Mesh::area() const {
  double a = 0.0;
  for (int c = 0; c < n_cells(); ++c) a += signed_area(c);
  return a;
}

const std::vector<BoundaryEdge>& boundary_loop(const Mesh& mesh) {
  return mesh.boundary_edges;
}

int cell_edge_index(const Mesh& mesh, const BoundaryEdge& edge) {
  const auto& t = mesh.triangles[edge.cell];
  for (int k = 0; k < 3; ++k) {
    if (t[k] == edge.endpoints[0] && t[(k + 1) % 3] == edge.endpoints[1])
      return k;
  }
  throw TopologyError("boundary edge endpoints not found in owning cell");
}

Mesh make_mesh(std::vector<Vec2> vertices,
               std::vector<std::array<int, 3>> triangles) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  const int nv = mesh.n_vertices();
  const int nt = mesh.n_cells();
  if (nt == 0) throw TopologyError("mesh has no triangles");

  for (int c = 0; c < nt; ++c) {
    auto& t = mesh.triangles[c];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv)
        throw TopologyError("triangle references missing vertex");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
      throw TopologyError("triangle with repeated vertex");
    if (mesh.signed_area(c) < 0.0) std::swap(t[1], t[2]);
  }

  // Edge incidence keyed by the undirected vertex pair.
  std::map<std::pair<int, int>, std::vector<EdgeUse>> uses;
  for (int c = 0; c < nt; ++c) {
    const auto& t = mesh.triangles[c];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      uses[{std::min(a, b), std::max(a, b)}].push_back({c, a < b});
    }
  }

  std::vector<bool> is_boundary_vertex(nv, false);
  std::map<int, std::vector<std::pair<int, int>>> outgoing;  // bnd a -> (b, cell)
  int n_boundary_edges = 0;
  for (const auto& [key, use] : uses) {
    if (use.size() > 2) {
      std::ostringstream msg;
      msg << "non-manifold edge (" << key.first << ", " << key.second
          << ") shared by " << use.size() << " cells";
      throw TopologyError(msg.str());
    }
    if (use.size() == 2) {
      if (use[0].forward == use[1].forward)
        throw TopologyError("inconsistently oriented interior edge");
      InteriorEdge e;
      e.endpoints = {key.first, key.second};
      e.cell_plus = use[0].forward ? use[0].cell : use[1].cell;
      e.cell_minus = use[0].forward ? use[1].cell : use[0].cell;
      mesh.interior_edges.push_back(e);
    } else {
      ++n_boundary_edges;
      is_boundary_vertex[key.first] = true;
      is_boundary_vertex[key.second] = true;
      // Boundary edges are traversed ccw by their owning (ccw) cell.
      const int cell = use[0].cell;
      const int a = use[0].forward ? key.first : key.second;
      const int b = use[0].forward ? key.second : key.first;
      outgoing[a].push_back({b, cell});
    }
  }

  const long v = nv;
  const long e = static_cast<long>(mesh.interior_edges.size()) + n_boundary_edges;
  if (v - e + nt != 1) {
    std::ostringstream msg;
    msg << "Euler relation violated: V=" << v << " E=" << e << " T=" << nt
        << " gives V-E+T=" << (v - e + nt) << " (expected 1, disc topology)";
    throw TopologyError(msg.str());
  }

  // Boundary vertices must lie on the unit circle (within the snap window);
  // snap them exactly so the theta calculus sees the true circle.
  for (int i = 0; i < nv; ++i) {
    if (!is_boundary_vertex[i]) continue;
    const double r = mesh.vertices[i].norm();
    if (std::abs(r - 1.0) > kCircleSnapTol) {
      std::ostringstream msg;
      msg << "boundary vertex " << i << " at (" << mesh.vertices[i].x() << ", "
          << mesh.vertices[i].y() << ") is off the unit circle by "
          << std::abs(r - 1.0);
      throw GeometryError(msg.str());
    }
    mesh.vertices[i] /= r;
  }

  for (int c = 0; c < nt; ++c) {
    if (mesh.signed_area(c) <= 0.0) {
      std::ostringstream msg;
      msg << "degenerate or inverted cell " << c << " (signed area "
          << mesh.signed_area(c) << ")";
      throw GeometryError(msg.str());
    }
  }

  // Walk the boundary loop counterclockwise from the smallest-angle vertex.
  for (const auto& [a, next] : outgoing) {
    if (next.size() != 1)
      throw TopologyError("boundary vertex with branching loop");
  }
  int start = -1;
  double start_theta = 0.0;
  for (const auto& [a, next] : outgoing) {
    const double th = wrap_angle(std::atan2(mesh.vertices[a].y(),
                                            mesh.vertices[a].x()));
    if (start < 0 || th < start_theta) {
      start = a;
      start_theta = th;
    }
  }
  if (start < 0) throw TopologyError("mesh has no boundary");

  int current = start;
  double theta = start_theta;
  std::size_t visited = 0;
  do {
    const auto [next, cell] = outgoing.at(current).front();
    BoundaryEdge edge;
    edge.cell = cell;
    edge.endpoints = {current, next};
    edge.length = (mesh.vertices[next] - mesh.vertices[current]).norm();
    edge.outward_normal = edge_normal(mesh.vertices[current], mesh.vertices[next]);
    const double next_theta = wrap_angle(std::atan2(mesh.vertices[next].y(),
                                                    mesh.vertices[next].x()));
    double width = next_theta - wrap_angle(theta);
    if (width <= 0.0) width += kTwoPi;
    if (width >= kMaxEdgeWidth) {
      std::ostringstream msg;
      msg << "boundary edge (" << current << ", " << next
          << ") subtends theta width " << width << ", too close to pi";
      throw GeometryError(msg.str());
    }
    edge.theta1 = theta;
    edge.theta2 = theta + width;
    theta = edge.theta2;
    mesh.boundary_edges.push_back(edge);
    current = next;
    ++visited;
    if (visited > outgoing.size())
      throw TopologyError("boundary loop does not close");
  } while (current != start);

  if (visited != static_cast<std::size_t>(n_boundary_edges))
    throw TopologyError("multiple boundary loops (disc has exactly one)");
  if (std::abs(theta - start_theta - kTwoPi) > 1e-10)
    throw TopologyError("boundary theta ranges do not cover 2*pi");

  // Interior edge geometry, plus cached orientation data.
  for (auto& e : mesh.interior_edges) {
    const Vec2& a = mesh.vertices[e.endpoints[0]];
    const Vec2& b = mesh.vertices[e.endpoints[1]];
    e.length = (b - a).norm();
    if (e.length <= 0.0) throw GeometryError("zero-length interior edge");
    e.normal = edge_normal(a, b);
  }

  for (const auto& e : mesh.boundary_edges) {
    const Vec2 mid = e.midpoint(mesh.vertices);
    if (e.outward_normal.dot(mid) <= 0.0)
      throw GeometryError("boundary normal points toward the disc centroid");
  }

  return mesh;
}

Mesh generate_disc_mesh(int n_boundary, double refinement_ratio) {
  if (n_boundary < 8)
    throw GeometryError("n_boundary must be at least 8 (got " +
                        std::to_string(n_boundary) + ")");
  if (!(refinement_ratio > 0.0) || refinement_ratio > 1.0)
    throw GeometryError("refinement_ratio must lie in (0, 1]");

  const double h_boundary = kTwoPi / n_boundary;
  const double h_center = h_boundary / refinement_ratio;
  // Target size grows linearly from the boundary value at r=1 to the center
  // value at r=0.
  const auto target = [&](double r) {
    return h_center + (h_boundary - h_center) * r;
  };

  // Ring radii from the boundary inward, stepping by roughly the height of
  // an equilateral triangle of the local target size.
  std::vector<double> radii = {1.0};
  while (true) {
    const double r = radii.back();
    const double dr = 0.866 * target(r);
    const double next = r - dr;
    if (next < 0.6 * target(0.0)) break;
    radii.push_back(next);
  }

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::vector<int>> rings;
  std::vector<std::vector<double>> ring_angles;

  int prev_count = n_boundary;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    int count = (k == 0)
                    ? n_boundary
                    : std::max(6, static_cast<int>(std::lround(kTwoPi * r /
                                                               target(r))));
    count = std::min(count, prev_count);
    prev_count = count;
    const double offset = (k % 2 == 1) ? 0.5 : 0.0;
    std::vector<int> ring;
    std::vector<double> angles;
    for (int j = 0; j < count; ++j) {
      const double th = kTwoPi * (j + offset) / count;
      ring.push_back(static_cast<int>(vertices.size()));
      vertices.push_back(r * Vec2(std::cos(th), std::sin(th)));
      angles.push_back(th);
    }
    rings.push_back(std::move(ring));
    ring_angles.push_back(std::move(angles));
  }
  const int center = static_cast<int>(vertices.size());
  vertices.push_back(Vec2::Zero());

  // Zipper triangulation between consecutive rings: advance whichever ring's
  // next vertex comes first in angle, so both rings are consumed exactly
  // once around.
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const auto& outer = rings[k];
    const auto& inner = rings[k + 1];
    const auto& oa = ring_angles[k];
    const auto& ia = ring_angles[k + 1];
    const int no = static_cast<int>(outer.size());
    const int ni = static_cast<int>(inner.size());

    // Align the starting inner vertex with the first outer one.
    int j0 = 0;
    double best = 10.0;
    for (int j = 0; j < ni; ++j) {
      const double d = std::abs(std::remainder(ia[j] - oa[0], kTwoPi));
      if (d < best) {
        best = d;
        j0 = j;
      }
    }

    const auto outer_angle = [&](int i) {
      return oa[i % no] + kTwoPi * (i / no);
    };
    // Unwrapped inner angles starting at j0, shifted so the start sits next
    // to the outer start.
    const double inner_shift =
        std::remainder(ia[j0] - oa[0], kTwoPi) - (ia[j0] - oa[0]);
    const auto inner_angle = [&](int j) {
      const int jj = j0 + j;
      return ia[jj % ni] + kTwoPi * (jj / ni) + inner_shift;
    };

    int i = 0, j = 0;
    while (i < no || j < ni) {
      const bool can_o = i < no;
      const bool can_i = j < ni;
      const double next_o = can_o ? outer_angle(i + 1) : 1e30;
      const double next_i = can_i ? inner_angle(j + 1) : 1e30;
      const int O0 = outer[i % no];
      const int O1 = outer[(i + 1) % no];
      const int I0 = inner[(j0 + j) % ni];
      const int I1 = inner[(j0 + j + 1) % ni];
      if (can_o && (!can_i || next_o <= next_i)) {
        triangles.push_back({O0, O1, I0});
        ++i;
      } else {
        triangles.push_back({O0, I1, I0});
        ++j;
      }
    }
  }

  // Fan from the innermost ring to the center vertex.
  {
    const auto& ring = rings.back();
    const int n = static_cast<int>(ring.size());
    for (int j = 0; j < n; ++j)
      triangles.push_back({ring[j], ring[(j + 1) % n], center});
  }

  return make_mesh(std::move(vertices), std::move(triangles));
}

}  // namespace elastrim
