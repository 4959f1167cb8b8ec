#pragma once

#include <string>

#include "elastrim/spaces.hpp"
#include "elastrim/types.hpp"

namespace elastrim {

enum class GuessKind { disc, ellipse, paraboloid, pringle, shoehorn };

GuessKind guess_from_name(const std::string& name);  // throws on unknown
std::string guess_name(GuessKind kind);

// Initial membrane shapes in polar coordinates (rho in [0,1], theta in
// [0,2*pi)):
//   disc:       (-rho sin, rho cos, 0)
//   ellipse:    (rho sin, rho cos, rho sin)
//   paraboloid: (rho cos, rho sin, -rho^2)
//   pringle:    (rho cos, -rho sin, rho^2 sin^2)
//   shoehorn:   (rho cos, -rho sin, rho sin + sin(pi rho / 2) cos(2 theta))
Vec3 guess_field(GuessKind kind, double rho, double theta);

// Nodal interpolation of the guess at each cell's 6 nodes per component;
// multiplier coefficients start at zero.
State interpolate_guess(const Mesh& mesh, const DofLayout& layout,
                        GuessKind kind);

// Scales the membrane coefficients by 2*pi / perimeter(state) so the trace
// curve has length exactly 2*pi; the multiplier is untouched. Throws
// GeometryError for a zero-perimeter state.
State rescale_to_perimeter(State state, const Mesh& mesh,
                           const DofLayout& layout);

}  // namespace elastrim
