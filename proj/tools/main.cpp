#include <CLI11.hpp>
#include <cstdio>
#include <random>

#include "elastrim/run.hpp"
#include "elastrim/verify.hpp"

namespace {

// --check-gradient: finite-difference oracle on a coarse generated mesh,
// exercising every term with a seeded random perturbation of the disc guess.
int check_gradient(const elastrim::ProblemConfig& config) {
  using namespace elastrim;
  const Mesh mesh = generate_disc_mesh(16, 1.0);
  const DofLayout layout = build_dofmaps(mesh);
  State state = interpolate_guess(mesh, layout, GuessKind::disc);
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (long i = 0; i < state.x.size(); ++i) state.x[i] += 0.01 * unit(rng);
  for (long i = 0; i < state.l.size(); ++i) state.l[i] = 0.1 * unit(rng);

  const double err =
      fd_gradient_check(state, config.problem, mesh, layout, 1e-6, 120);
  std::printf("fd gradient check: mesh %d cells, max relative error %.3e "
              "(tolerance 1e-05)\n",
              mesh.n_cells(), err);
  return err <= 1e-5 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace elastrim;
  CLI::App app{
      "elastrim: critical points of the bending + linear-elastic-membrane "
      "energy on the unit disc with an elastic, length-constrained boundary"};
  app.set_config("--config", "", "flat key = value configuration file");

  std::string mesh_path, tensor = "identity", guess = "disc", output = "out";
  std::vector<double> generate = {64.0, 0.5};
  ProblemConfig config;
  double tol = config.solver.abs_tol;
  int max_iters = config.solver.max_iters;
  bool run_gradient_check = false;

  auto* mesh_opt =
      app.add_option("--mesh", mesh_path, "ASCII MSH v2.2 mesh of the unit disc");
  auto* gen_opt = app.add_option(
      "--generate", generate,
      "built-in disc mesher: n_boundary (>= 8) and refinement ratio in (0,1]");
  gen_opt->expected(2);
  mesh_opt->excludes(gen_opt);
  gen_opt->excludes(mesh_opt);

  app.add_option("--tensor", tensor, "elasticity tensor")
      ->check(CLI::IsMember({"identity", "aniso_trace", "aniso_shear"}));
  app.add_option("--guess", guess, "initial membrane shape")
      ->check(CLI::IsMember(
          {"disc", "ellipse", "paraboloid", "pringle", "shoehorn"}));
  app.add_option("--mu", config.problem.mu, "shear modulus")
      ->check(CLI::PositiveNumber);
  app.add_option("--alpha", config.problem.alpha, "interior penalty coefficient")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", config.problem.epsilon, "anchor coefficient")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "Newton absolute residual tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iters", max_iters, "Newton iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", config.threads, "assembly threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", output, "output directory");
  app.add_flag("--check-gradient", run_gradient_check,
               "run the finite-difference gradient oracle on a coarse mesh "
               "and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  config.mesh_path = mesh_path;
  config.n_boundary = static_cast<int>(generate[0]);
  config.refinement_ratio = generate[1];
  config.problem.tensor.kind = tensor_from_name(tensor);
  config.guess = guess_from_name(guess);
  config.solver.abs_tol = tol;
  config.solver.max_iters = max_iters;
  config.output_dir = output;

  if (run_gradient_check) return check_gradient(config);
  return run(config);
}
