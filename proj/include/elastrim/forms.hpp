#pragma once

#include <utility>

#include "elastrim/mesh.hpp"
#include "elastrim/spaces.hpp"
#include "elastrim/tensors.hpp"
#include "elastrim/types.hpp"

namespace elastrim {

struct Problem {
  double mu = 1.0;        // shear modulus weighting the membrane energy
  double alpha = 1e4;     // interior-penalty coefficient
  double epsilon = 1e-5;  // anchor coefficient preventing rigid motions
  ElasticityField tensor;
};

// The augmented energy, reported term by term:
//   total = bending + membrane + constraint + sipg_consistency
//         + sipg_penalty + anchor
// with
//   bending          = int_{bnd} |d2_theta X|^2 dtheta
//   membrane         = (mu/2) int_D C grad X : grad X
//   constraint       = int_{bnd} l (|d_theta X|^2 - 1) dtheta
//   sipg_consistency = -mu sum_e int_e {{C grad X}} : [[X]]
//   sipg_penalty     = sum_e (alpha / 2 h_e) int_e |[[X]]|^2
//   anchor           = (epsilon/2) int_D |X|^2
struct EnergyBreakdown {
  double bending = 0.0;
  double membrane = 0.0;
  double constraint = 0.0;
  double sipg_consistency = 0.0;
  double sipg_penalty = 0.0;
  double anchor = 0.0;
  double total = 0.0;
};

// Two-sided edge operators: the jump [[X]] = X+ (x) n+ + X- (x) n- with
// n- = -n+ (so [[X]] = (X+ - X-) (x) n+), and the flux average, the
// arithmetic mean of the one-sided fluxes.
std::pair<Mat32, Mat32> apply_jump_average(const InteriorEdge& edge,
                                           const Vec3& plus_trace,
                                           const Vec3& minus_trace,
                                           const Mat32& plus_flux,
                                           const Mat32& minus_flux);

EnergyBreakdown augmented_energy(const State& state, const Problem& problem,
                                 const Mesh& mesh, const DofLayout& layout,
                                 int threads = 1);

// Exact gradient of the augmented energy: the membrane block tests against
// every vector basis function V, the multiplier block against every scalar
// boundary basis m. Length = membrane_total + multiplier_total.
VecX residual(const State& state, const Problem& problem, const Mesh& mesh,
              const DofLayout& layout, int threads = 1);

// Exact derivative of the residual: constant membrane/SIPG/anchor/bending
// blocks, the l-x coupling block and its transpose, the l-dependent x-x
// term, and a zero l-l block (saddle-point structure). Symmetric for every
// catalog tensor.
SparseMat jacobian(const State& state, const Problem& problem,
                   const Mesh& mesh, const DofLayout& layout, int threads = 1);

}  // namespace elastrim
