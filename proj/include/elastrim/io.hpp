#pragma once

#include <string>

#include "elastrim/forms.hpp"
#include "elastrim/solver.hpp"
#include "elastrim/verify.hpp"

namespace elastrim {

// XML VTU (ASCII) with quadratic triangle cells; points are duplicated per
// cell so the discontinuous space is represented faithfully. Point data:
// "displacement" (3 components) and "magnitude".
void write_vtu(const State& state, const Mesh& mesh, const DofLayout& layout,
               const std::string& path);

// CSV "iter,residual_norm,step_length"; row 0 carries the initial residual,
// the final row a fourth field with the termination reason.
void write_iteration_log(const NewtonReport& report, const std::string& path);

// Flat key = value summary of the run outcome.
void write_summary(const NewtonReport& report, const EnergyBreakdown& energy,
                   const ShapeReport& shape, const std::string& path);

}  // namespace elastrim
