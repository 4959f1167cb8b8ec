#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "elastrim/forms.hpp"
#include "elastrim/types.hpp"

namespace elastrim {

struct SolverConfig {
  double abs_tol = 1e-6;
  double rel_tol = 1e-8;
  int max_iters = 50;
  double ls_sufficient_decrease = 1e-4;
  double ls_min_step = 1e-12;
  int ls_max_backtracks = 40;
};

enum class Termination {
  converged,
  max_iterations,
  linear_failure,
  line_search_failure,
};

std::string termination_name(Termination reason);

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_norms;  // iterations + 1 entries
  std::vector<double> step_lengths;    // accepted steps, in (0, 1]
  Termination termination_reason = Termination::max_iterations;
};

// Direct sparse LU solve of the symmetric-indefinite saddle-point system,
// with one step of iterative refinement. Throws LinearSolveError (carrying
// the factorization's pivot/column diagnostic) on singular matrices.
VecX solve_linear(const SparseMat& J, const VecX& rhs);

// Backtracking line search on a scalar merit: accepts the largest tested
// step satisfying merit(step) <= merit0 + c1 * step * g0. The first
// backtrack interpolates a quadratic model, subsequent ones a cubic through
// the last two trials, each safeguarded into [0.1, 0.5] times the previous
// step. Requires g0 < 0; throws LineSearchError on exhaustion below
// ls_min_step.
double line_search_cubic(const std::function<double(double)>& merit,
                         double merit0, double g0, const SolverConfig& config);

// Newton's method on the assembled residual with the cubic backtracking
// line search; the merit is half the squared residual norm. The returned
// state is the last accepted iterate whether or not converged.
std::pair<State, NewtonReport> newton_solve(const State& initial,
                                            const Problem& problem,
                                            const Mesh& mesh,
                                            const DofLayout& layout,
                                            const SolverConfig& config = {},
                                            int threads = 1);

}  // namespace elastrim
