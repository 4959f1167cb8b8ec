#pragma once

#include <string>

#include "elastrim/types.hpp"

namespace elastrim {

enum class TensorKind { identity, aniso_trace, aniso_shear };

// Spatially varying fourth-order elasticity tensor, applied as a linear map
// on 3x2 gradients. Index convention: C_ijkl with i,k ambient components
// (1..3) and j,l parametric directions (1..2); mixed-range Kronecker deltas
// are 1 iff the numeric indices coincide. All catalog tensors have major
// symmetry C_ijkl = C_klij and are pointwise coercive.
//
// With tr2(G) = G11 + G22 and I2 the 3x2 matrix with ones at (1,1),(2,2):
//   identity:    C G = G
//   aniso_trace: C_ijkl = |u| d_ij d_kl + 2 d_ik d_jl
//                C G = |u| tr2(G) I2 + 2 G
//   aniso_shear: C_ijkl = d_ij d_kl + 2 (1 + 10 sin^2 u) d_ik d_jl
//                C G = tr2(G) I2 + 2 (1 + 10 sin^2 u) G
// where u is the first Cartesian coordinate of the evaluation point
// (u = rho cos theta).
struct ElasticityField {
  TensorKind kind = TensorKind::identity;

  bool spatially_varying() const { return kind != TensorKind::identity; }
  Mat32 apply(const Vec2& point, const Mat32& G) const;
};

TensorKind tensor_from_name(const std::string& name);  // throws on unknown
std::string tensor_name(TensorKind kind);

}  // namespace elastrim
