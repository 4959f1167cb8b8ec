#include "elastrim/guesses.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "elastrim/boundary.hpp"
#include "elastrim/errors.hpp"

namespace elastrim {

Vec3 guess_field(GuessKind kind, double rho, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  switch (kind) {
    case GuessKind::disc:
      return {-rho * s, rho * c, 0.0};
    case GuessKind::ellipse:
      return {rho * s, rho * c, rho * s};
    case GuessKind::paraboloid:
      return {rho * c, rho * s, -rho * rho};
    case GuessKind::pringle:
      return {rho * c, -rho * s, rho * rho * s * s};
    case GuessKind::shoehorn:
      return {rho * c, -rho * s,
              rho * s + std::sin(0.5 * std::numbers::pi * rho) *
                            std::cos(2.0 * theta)};
  }
  throw std::logic_error("unreachable guess kind");
}

GuessKind guess_from_name(const std::string& name) {
  if (name == "disc") return GuessKind::disc;
  if (name == "ellipse") return GuessKind::ellipse;
  if (name == "paraboloid") return GuessKind::paraboloid;
  if (name == "pringle") return GuessKind::pringle;
  if (name == "shoehorn") return GuessKind::shoehorn;
  throw std::invalid_argument("unknown guess name: " + name);
}

std::string guess_name(GuessKind kind) {
  switch (kind) {
    case GuessKind::disc: return "disc";
    case GuessKind::ellipse: return "ellipse";
    case GuessKind::paraboloid: return "paraboloid";
    case GuessKind::pringle: return "pringle";
    case GuessKind::shoehorn: return "shoehorn";
  }
  return "?";
}

State interpolate_guess(const Mesh& mesh, const DofLayout& layout,
                        GuessKind kind) {
  State state = zero_state(layout);
  const auto& nodes = p2_triangle_nodes();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int node = 0; node < 6; ++node) {
      const Vec2 p = mesh.physical_point(c, nodes[node]);
      const double rho = p.norm();
      double theta = std::atan2(p.y(), p.x());
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      const Vec3 value = guess_field(kind, rho, theta);
      for (int comp = 0; comp < 3; ++comp)
        state.x[layout.membrane_dof(c, node, comp)] = value[comp];
    }
  }
  return state;
}

State rescale_to_perimeter(State state, const Mesh& mesh,
                           const DofLayout& layout) {
  const double p = perimeter(state, mesh, layout);
  if (!(p > 0.0))
    throw GeometryError("degenerate guess: zero boundary perimeter");
  state.x *= 2.0 * std::numbers::pi / p;
  return state;
}

}  // namespace elastrim
