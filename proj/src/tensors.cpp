#include "elastrim/tensors.hpp"

#include <cmath>
#include <stdexcept>

namespace elastrim {

namespace {

Mat32 trace_part(const Mat32& G) {
  Mat32 out = Mat32::Zero();
  const double tr = G(0, 0) + G(1, 1);
  out(0, 0) = tr;
  out(1, 1) = tr;
  return out;
}

}  // namespace

Mat32 ElasticityField::apply(const Vec2& point, const Mat32& G) const {
  switch (kind) {
    case TensorKind::identity:
      return G;
    case TensorKind::aniso_trace:
      // C_ijkl = |u| d_ij d_kl + 2 d_ik d_jl
      return std::abs(point.x()) * trace_part(G) + 2.0 * G;
    case TensorKind::aniso_shear:
      // C_ijkl = d_ij d_kl + 2 (1 + 10 sin^2 u) d_ik d_jl
      const double s = std::sin(point.x());
      return trace_part(G) + 2.0 * (1.0 + 10.0 * s * s) * G;
  }
  throw std::logic_error("unreachable tensor kind");
}

TensorKind tensor_from_name(const std::string& name) {
  if (name == "identity") return TensorKind::identity;
  if (name == "aniso_trace") return TensorKind::aniso_trace;
  if (name == "aniso_shear") return TensorKind::aniso_shear;
  throw std::invalid_argument("unknown tensor name: " + name);
}

std::string tensor_name(TensorKind kind) {
  switch (kind) {
    case TensorKind::identity: return "identity";
    case TensorKind::aniso_trace: return "aniso_trace";
    case TensorKind::aniso_shear: return "aniso_shear";
  }
  return "?";
}

}  // namespace elastrim
