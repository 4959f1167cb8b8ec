#include "elastrim/forms.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "elastrim/boundary.hpp"
#include "elastrim/errors.hpp"

namespace elastrim {

namespace {

struct CellGeometry {
  Vec2 v0;
  Mat2 jac;
  Mat2 inv_t;  // J^{-T}, maps reference gradients to physical ones
  double det = 0.0;
};

CellGeometry cell_geometry(const Mesh& mesh, int c) {
  CellGeometry g;
  g.v0 = mesh.vertices[mesh.triangles[c][0]];
  g.jac = mesh.cell_jacobian(c);
  g.det = g.jac.determinant();
  g.inv_t = g.jac.inverse().transpose();
  return g;
}

const QuadratureRule& cell_rule(const Problem& problem) {
  static const QuadratureRule constant_rule = triangle_quadrature(4);
  static const QuadratureRule varying_rule = triangle_quadrature(6);
  return problem.tensor.spatially_varying() ? varying_rule : constant_rule;
}

const QuadratureRule& edge_rule() {
  static const QuadratureRule rule = segment_quadrature(7);
  return rule;
}

// Basis data of one cell evaluated at one physical point.
struct SideEval {
  Basis6 n;
  Grad6 grad;  // physical gradients
};

SideEval evaluate_side(const CellGeometry& g, const Vec2& p) {
  SideEval s;
  const Vec2 ref = g.inv_t.transpose() * (p - g.v0);  // J^{-1} (p - v0)
  Grad6 ref_grad;
  p2_triangle_basis(ref, s.n, ref_grad);
  s.grad = ref_grad * g.inv_t.transpose();  // rows times J^{-1}
  return s;
}

Mat32 membrane_gradient(const State& state, const DofLayout& layout, int cell,
                        const SideEval& s) {
  Mat32 G = Mat32::Zero();
  for (int node = 0; node < 6; ++node)
    for (int comp = 0; comp < 3; ++comp)
      G.row(comp) += state.x[layout.membrane_dof(cell, node, comp)] *
                     s.grad.row(node);
  return G;
}

Vec3 membrane_value(const State& state, const DofLayout& layout, int cell,
                    const SideEval& s) {
  Vec3 X = Vec3::Zero();
  for (int node = 0; node < 6; ++node)
    for (int comp = 0; comp < 3; ++comp)
      X[comp] += state.x[layout.membrane_dof(cell, node, comp)] * s.n[node];
  return X;
}

Mat32 basis_matrix(int comp, const Eigen::RowVector2d& grad) {
  Mat32 out = Mat32::Zero();
  out.row(comp) = grad;
  return out;
}

void check_finite(const State& state) {
  if (!state.x.allFinite() || !state.l.allFinite())
    throw std::invalid_argument("state coefficients are not finite");
}

// Runs fn(begin, end, chunk) over [0, n) split into `threads` contiguous
// chunks. Chunk boundaries depend only on n and threads, so per-chunk
// accumulation merged in chunk order is reproducible.
template <typename Fn>
void for_each_chunk(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  for (int c = 0; c < threads; ++c) {
    const int begin = static_cast<int>(static_cast<long>(n) * c / threads);
    const int end = static_cast<int>(static_cast<long>(n) * (c + 1) / threads);
    pool.emplace_back([&fn, begin, end, c] { fn(begin, end, c); });
  }
  for (auto& t : pool) t.join();
}

// Multiplier coefficients of one boundary edge, ordered like the segment
// basis nodes (t=0, t=1, midpoint).
Vec3 multiplier_block(const State& state, const DofLayout& layout, int edge) {
  Vec3 l;
  for (int i = 0; i < 3; ++i) l[i] = state.l[layout.boundary_to_global(edge, i)];
  return l;
}

constexpr double kD2[3] = {4.0, 4.0, -8.0};  // segment basis second derivatives

}  // namespace

std::pair<Mat32, Mat32> apply_jump_average(const InteriorEdge& edge,
                                           const Vec3& plus_trace,
                                           const Vec3& minus_trace,
                                           const Mat32& plus_flux,
                                           const Mat32& minus_flux) {
  const Mat32 jump = (plus_trace - minus_trace) * edge.normal.transpose();
  const Mat32 average = 0.5 * (plus_flux + minus_flux);
  return {jump, average};
}

EnergyBreakdown augmented_energy(const State& state, const Problem& problem,
                                 const Mesh& mesh, const DofLayout& layout,
                                 int threads) {
  check_finite(state);
  EnergyBreakdown e;

  // Cell terms: membrane + anchor.
  const QuadratureRule& crule = cell_rule(problem);
  const int chunks = std::max(1, std::min(threads, mesh.n_cells()));
  std::vector<double> membrane_part(chunks, 0.0), anchor_part(chunks, 0.0);
  for_each_chunk(mesh.n_cells(), threads, [&](int begin, int end, int chunk) {
    double mem = 0.0, anc = 0.0;
    for (int c = begin; c < end; ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      for (long q = 0; q < crule.weights.size(); ++q) {
        const Vec2 ref = crule.points.row(q).transpose();
        SideEval s;
        Grad6 ref_grad;
        p2_triangle_basis(ref, s.n, ref_grad);
        s.grad = ref_grad * g.inv_t.transpose();
        const Vec2 p = g.v0 + g.jac * ref;
        const Mat32 G = membrane_gradient(state, layout, c, s);
        const Vec3 X = membrane_value(state, layout, c, s);
        const double dmeas = crule.weights[q] * g.det;
        mem += 0.5 * problem.mu * dmeas *
               problem.tensor.apply(p, G).cwiseProduct(G).sum();
        anc += 0.5 * problem.epsilon * dmeas * X.squaredNorm();
      }
    }
    membrane_part[chunk] = mem;
    anchor_part[chunk] = anc;
  });
  for (int c = 0; c < chunks; ++c) {
    e.membrane += membrane_part[c];
    e.anchor += anchor_part[c];
  }

  // Interior-edge SIPG terms.
  const QuadratureRule& erule = edge_rule();
  for (const InteriorEdge& edge : mesh.interior_edges) {
    const Vec2 a = mesh.vertices[edge.endpoints[0]];
    const Vec2 b = mesh.vertices[edge.endpoints[1]];
    const CellGeometry gp = cell_geometry(mesh, edge.cell_plus);
    const CellGeometry gm = cell_geometry(mesh, edge.cell_minus);
    for (long q = 0; q < erule.weights.size(); ++q) {
      const double t = erule.points(q, 0);
      const Vec2 p = (1.0 - t) * a + t * b;
      const SideEval sp = evaluate_side(gp, p);
      const SideEval sm = evaluate_side(gm, p);
      const Vec3 xp = membrane_value(state, layout, edge.cell_plus, sp);
      const Vec3 xm = membrane_value(state, layout, edge.cell_minus, sm);
      const Mat32 fp = problem.tensor.apply(
          p, membrane_gradient(state, layout, edge.cell_plus, sp));
      const Mat32 fm = problem.tensor.apply(
          p, membrane_gradient(state, layout, edge.cell_minus, sm));
      const auto [jump, average] = apply_jump_average(edge, xp, xm, fp, fm);
      const double dmeas = erule.weights[q] * edge.length;
      e.sipg_consistency -=
          problem.mu * dmeas * average.cwiseProduct(jump).sum();
      e.sipg_penalty += 0.5 * problem.alpha / edge.length * dmeas *
                        jump.squaredNorm();
    }
  }

  // Boundary terms: bending + length constraint.
  for (int be = 0; be < static_cast<int>(mesh.boundary_edges.size()); ++be) {
    const double width = mesh.boundary_edges[be].theta_width();
    const TraceBlock block = boundary_trace(state, mesh, layout, be);
    const Vec3 d2 = block * Eigen::Vector3d(kD2[0], kD2[1], kD2[2]);
    e.bending += d2.squaredNorm() / (width * width * width);

    const Vec3 lcoef = multiplier_block(state, layout, be);
    for (long q = 0; q < erule.weights.size(); ++q) {
      Vec3 n, d1, dd;
      p2_segment_basis(erule.points(q, 0), n, d1, dd);
      const Vec3 velocity = block * d1;  // dX/dt
      const double ell = lcoef.dot(n);
      e.constraint += erule.weights[q] * width * ell *
                      (velocity.squaredNorm() / (width * width) - 1.0);
    }
  }

  e.total = e.bending + e.membrane + e.constraint + e.sipg_consistency +
            e.sipg_penalty + e.anchor;
  return e;
}

VecX residual(const State& state, const Problem& problem, const Mesh& mesh,
              const DofLayout& layout, int threads) {
  check_finite(state);
  VecX r = VecX::Zero(layout.total());

  // Cell terms write disjoint DOF blocks, so chunks may share the vector.
  const QuadratureRule& crule = cell_rule(problem);
  for_each_chunk(mesh.n_cells(), threads, [&](int begin, int end, int) {
    for (int c = begin; c < end; ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      for (long q = 0; q < crule.weights.size(); ++q) {
        const Vec2 ref = crule.points.row(q).transpose();
        SideEval s;
        Grad6 ref_grad;
        p2_triangle_basis(ref, s.n, ref_grad);
        s.grad = ref_grad * g.inv_t.transpose();
        const Vec2 p = g.v0 + g.jac * ref;
        const Mat32 G = membrane_gradient(state, layout, c, s);
        const Vec3 X = membrane_value(state, layout, c, s);
        const Mat32 flux = problem.tensor.apply(p, G);
        const double dmeas = crule.weights[q] * g.det;
        for (int node = 0; node < 6; ++node)
          for (int comp = 0; comp < 3; ++comp)
            r[layout.membrane_dof(c, node, comp)] +=
                dmeas * (problem.mu * flux.row(comp).dot(s.grad.row(node)) +
                         problem.epsilon * X[comp] * s.n[node]);
      }
    }
  });

  // SIPG terms.
  const QuadratureRule& erule = edge_rule();
  for (const InteriorEdge& edge : mesh.interior_edges) {
    const Vec2 a = mesh.vertices[edge.endpoints[0]];
    const Vec2 b = mesh.vertices[edge.endpoints[1]];
    const int cells[2] = {edge.cell_plus, edge.cell_minus};
    const double sign[2] = {1.0, -1.0};
    const CellGeometry geo[2] = {cell_geometry(mesh, cells[0]),
                                 cell_geometry(mesh, cells[1])};
    for (long q = 0; q < erule.weights.size(); ++q) {
      const double t = erule.points(q, 0);
      const Vec2 p = (1.0 - t) * a + t * b;
      const SideEval ev[2] = {evaluate_side(geo[0], p),
                              evaluate_side(geo[1], p)};
      const Vec3 trace[2] = {membrane_value(state, layout, cells[0], ev[0]),
                             membrane_value(state, layout, cells[1], ev[1])};
      const Mat32 flux[2] = {
          problem.tensor.apply(
              p, membrane_gradient(state, layout, cells[0], ev[0])),
          problem.tensor.apply(
              p, membrane_gradient(state, layout, cells[1], ev[1]))};
      const auto [jump, average] =
          apply_jump_average(edge, trace[0], trace[1], flux[0], flux[1]);
      const Vec3 jump_n = jump * edge.normal;        // (X+ - X-) per component
      const Vec3 average_n = average * edge.normal;  // flux average times n+
      const double dmeas = erule.weights[q] * edge.length;
      for (int side = 0; side < 2; ++side) {
        for (int node = 0; node < 6; ++node) {
          for (int comp = 0; comp < 3; ++comp) {
            // -mu ({{C grad X}} : [[V]] + {{C grad V}} : [[X]])
            //  + (alpha / h_e) [[X]] : [[V]]
            const Mat32 cgv = problem.tensor.apply(
                p, basis_matrix(comp, ev[side].grad.row(node)));
            double val = -problem.mu *
                         (sign[side] * ev[side].n[node] * average_n[comp] +
                          0.5 * (cgv * edge.normal).dot(jump_n));
            val += problem.alpha / edge.length * sign[side] *
                   ev[side].n[node] * jump_n[comp];
            r[layout.membrane_dof(cells[side], node, comp)] += dmeas * val;
          }
        }
      }
    }
  }

  // Boundary terms.
  for (int be = 0; be < static_cast<int>(mesh.boundary_edges.size()); ++be) {
    const BoundaryEdge& edge = mesh.boundary_edges[be];
    const double width = edge.theta_width();
    const TraceBlock block = boundary_trace(state, mesh, layout, be);
    const int k = cell_edge_index(mesh, edge);
    const int locals[3] = {k, (k + 1) % 3, 3 + k};

    // Bending: 2 int d2 V . d2 X dtheta, edgewise constant integrand.
    const Vec3 d2x = block * Eigen::Vector3d(kD2[0], kD2[1], kD2[2]);
    const double w3 = width * width * width;
    for (int j = 0; j < 3; ++j)
      for (int comp = 0; comp < 3; ++comp)
        r[layout.membrane_dof(edge.cell, locals[j], comp)] +=
            2.0 * d2x[comp] * kD2[j] / w3;

    const Vec3 lcoef = multiplier_block(state, layout, be);
    for (long q = 0; q < erule.weights.size(); ++q) {
      Vec3 n, d1, dd;
      p2_segment_basis(erule.points(q, 0), n, d1, dd);
      const Vec3 velocity = block * d1;
      const double ell = lcoef.dot(n);
      const double wq = erule.weights[q];
      // 2 int l dtheta(V) . dtheta(X) dtheta
      for (int j = 0; j < 3; ++j)
        for (int comp = 0; comp < 3; ++comp)
          r[layout.membrane_dof(edge.cell, locals[j], comp)] +=
              wq * 2.0 / width * ell * velocity[comp] * d1[j];
      // int m (|dtheta X|^2 - 1) dtheta
      const double defect = velocity.squaredNorm() / (width * width) - 1.0;
      for (int i = 0; i < 3; ++i)
        r[layout.membrane_total + layout.boundary_to_global(be, i)] +=
            wq * width * n[i] * defect;
    }
  }

  return r;
}

SparseMat jacobian(const State& state, const Problem& problem,
                   const Mesh& mesh, const DofLayout& layout, int threads) {
  check_finite(state);
  const QuadratureRule& crule = cell_rule(problem);
  const QuadratureRule& erule = edge_rule();

  const int chunks = std::max(1, std::min(threads, mesh.n_cells()));
  std::vector<std::vector<Triplet>> cell_triplets(chunks);

  // Cell blocks (membrane + anchor): state independent.
  for_each_chunk(mesh.n_cells(), threads, [&](int begin, int end, int chunk) {
    auto& out = cell_triplets[chunk];
    for (int c = begin; c < end; ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      Eigen::Matrix<double, 18, 18> block =
          Eigen::Matrix<double, 18, 18>::Zero();
      for (long q = 0; q < crule.weights.size(); ++q) {
        const Vec2 ref = crule.points.row(q).transpose();
        SideEval s;
        Grad6 ref_grad;
        p2_triangle_basis(ref, s.n, ref_grad);
        s.grad = ref_grad * g.inv_t.transpose();
        const Vec2 p = g.v0 + g.jac * ref;
        const double dmeas = crule.weights[q] * g.det;
        for (int m = 0; m < 6; ++m) {
          for (int j = 0; j < 3; ++j) {
            const Mat32 cf =
                problem.tensor.apply(p, basis_matrix(j, s.grad.row(m)));
            for (int node = 0; node < 6; ++node) {
              for (int comp = 0; comp < 3; ++comp) {
                double val =
                    problem.mu * cf.row(comp).dot(s.grad.row(node));
                if (comp == j)
                  val += problem.epsilon * s.n[node] * s.n[m];
                block(3 * node + comp, 3 * m + j) += dmeas * val;
              }
            }
          }
        }
      }
      for (int row = 0; row < 18; ++row)
        for (int col = 0; col < 18; ++col)
          out.emplace_back(layout.cell_to_global(c, row),
                           layout.cell_to_global(c, col), block(row, col));
    }
  });

  std::vector<Triplet> triplets;
  std::size_t n_cell_triplets = 0;
  for (const auto& part : cell_triplets) n_cell_triplets += part.size();
  triplets.reserve(n_cell_triplets + 1296 * mesh.interior_edges.size() +
                   160 * mesh.boundary_edges.size());
  for (const auto& part : cell_triplets)
    triplets.insert(triplets.end(), part.begin(), part.end());

  // SIPG blocks: state independent, 36x36 over the two cells of each edge.
  for (const InteriorEdge& edge : mesh.interior_edges) {
    const Vec2 a = mesh.vertices[edge.endpoints[0]];
    const Vec2 b = mesh.vertices[edge.endpoints[1]];
    const int cells[2] = {edge.cell_plus, edge.cell_minus};
    const double sign[2] = {1.0, -1.0};
    const CellGeometry geo[2] = {cell_geometry(mesh, cells[0]),
                                 cell_geometry(mesh, cells[1])};
    Eigen::Matrix<double, 36, 36> block = Eigen::Matrix<double, 36, 36>::Zero();
    for (long q = 0; q < erule.weights.size(); ++q) {
      const double t = erule.points(q, 0);
      const Vec2 p = (1.0 - t) * a + t * b;
      const SideEval ev[2] = {evaluate_side(geo[0], p),
                              evaluate_side(geo[1], p)};
      // Normal fluxes C(e_comp x grad N) . n for all sides/nodes/components.
      Vec3 qflux[2][6][3];
      for (int side = 0; side < 2; ++side)
        for (int node = 0; node < 6; ++node)
          for (int comp = 0; comp < 3; ++comp)
            qflux[side][node][comp] =
                problem.tensor.apply(
                    p, basis_matrix(comp, ev[side].grad.row(node))) *
                edge.normal;
      const double dmeas = erule.weights[q] * edge.length;
      for (int st = 0; st < 2; ++st) {        // trial side
        for (int ss = 0; ss < 2; ++ss) {      // test side
          for (int m = 0; m < 6; ++m) {
            for (int j = 0; j < 3; ++j) {
              for (int node = 0; node < 6; ++node) {
                for (int comp = 0; comp < 3; ++comp) {
                  double val = -0.5 * problem.mu *
                               (sign[ss] * ev[ss].n[node] *
                                    qflux[st][m][j][comp] +
                                sign[st] * ev[st].n[m] *
                                    qflux[ss][node][comp][j]);
                  if (comp == j)
                    val += problem.alpha / edge.length * sign[st] * sign[ss] *
                           ev[st].n[m] * ev[ss].n[node];
                  block(18 * ss + 3 * node + comp, 18 * st + 3 * m + j) +=
                      dmeas * val;
                }
              }
            }
          }
        }
      }
    }
    for (int rs = 0; rs < 2; ++rs)
      for (int cs = 0; cs < 2; ++cs)
        for (int row = 0; row < 18; ++row)
          for (int col = 0; col < 18; ++col)
            triplets.emplace_back(
                layout.cell_to_global(cells[rs], row),
                layout.cell_to_global(cells[cs], col),
                block(18 * rs + row, 18 * cs + col));
  }

  // Boundary blocks: constant bending, l-dependent x-x coupling, and the
  // bilinear x-l block with its transpose. The l-l block is zero.
  for (int be = 0; be < static_cast<int>(mesh.boundary_edges.size()); ++be) {
    const BoundaryEdge& edge = mesh.boundary_edges[be];
    const double width = edge.theta_width();
    const TraceBlock block = boundary_trace(state, mesh, layout, be);
    const int k = cell_edge_index(mesh, edge);
    const int locals[3] = {k, (k + 1) % 3, 3 + k};
    const Vec3 lcoef = multiplier_block(state, layout, be);

    const double w3 = width * width * width;
    for (int j = 0; j < 3; ++j)
      for (int jj = 0; jj < 3; ++jj)
        for (int comp = 0; comp < 3; ++comp)
          triplets.emplace_back(
              layout.membrane_dof(edge.cell, locals[j], comp),
              layout.membrane_dof(edge.cell, locals[jj], comp),
              2.0 * kD2[j] * kD2[jj] / w3);

    for (long q = 0; q < erule.weights.size(); ++q) {
      Vec3 n, d1, dd;
      p2_segment_basis(erule.points(q, 0), n, d1, dd);
      const Vec3 velocity = block * d1;
      const double ell = lcoef.dot(n);
      const double wq = erule.weights[q];
      for (int j = 0; j < 3; ++j) {
        for (int jj = 0; jj < 3; ++jj) {
          const double xx = wq * 2.0 / width * ell * d1[j] * d1[jj];
          for (int comp = 0; comp < 3; ++comp)
            triplets.emplace_back(
                layout.membrane_dof(edge.cell, locals[j], comp),
                layout.membrane_dof(edge.cell, locals[jj], comp), xx);
        }
        for (int i = 0; i < 3; ++i) {
          const long ldof = layout.membrane_total +
                            layout.boundary_to_global(be, i);
          for (int comp = 0; comp < 3; ++comp) {
            const long xdof = layout.membrane_dof(edge.cell, locals[j], comp);
            const double val =
                wq * 2.0 / width * n[i] * d1[j] * velocity[comp];
            triplets.emplace_back(xdof, ldof, val);
            triplets.emplace_back(ldof, xdof, val);
          }
        }
      }
    }
  }

  SparseMat J(layout.total(), layout.total());
  J.setFromTriplets(triplets.begin(), triplets.end());
  return J;
}

}  // namespace elastrim
