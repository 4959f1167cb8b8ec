#pragma once

#include <string>

#include "elastrim/guesses.hpp"
#include "elastrim/solver.hpp"

namespace elastrim {

struct ProblemConfig {
  Problem problem;
  GuessKind guess = GuessKind::disc;
  // Mesh source: a file path, or the built-in generator when path is empty.
  std::string mesh_path;
  int n_boundary = 64;
  double refinement_ratio = 0.5;
  SolverConfig solver;
  std::string output_dir = "out";
  int threads = 1;
};

// Exit codes of the run pipeline (mesh -> guess -> rescale -> solve ->
// verify -> artifacts). 0 iff converged and the constraint thresholds pass.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitLinearFailure = 3,
  kExitLineSearchFailure = 4,
  kExitNoConvergence = 5,
  kExitConstraints = 6,
};

// Runs the full pipeline, writing guess.vtu, solution.vtu, iterations.csv
// and summary.txt into output_dir.
int run(const ProblemConfig& config);

}  // namespace elastrim
