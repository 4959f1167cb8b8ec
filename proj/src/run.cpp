#include "elastrim/run.hpp"

#include <exception>
#include <filesystem>
#include <iostream>

#include "elastrim/errors.hpp"
#include "elastrim/io.hpp"
#include "elastrim/msh_io.hpp"
#include "elastrim/verify.hpp"

namespace elastrim {

int run(const ProblemConfig& config) {
  Mesh mesh;
  try {
    mesh = config.mesh_path.empty()
               ? generate_disc_mesh(config.n_boundary, config.refinement_ratio)
               : read_msh(config.mesh_path);
  } catch (const MeshError& err) {
    std::cerr << "mesh error: " << err.what() << '\n';
    return kExitUsage;
  }

  const DofLayout layout = build_dofmaps(mesh);
  std::cout << "mesh: " << mesh.n_vertices() << " vertices, " << mesh.n_cells()
            << " cells, " << mesh.boundary_edges.size()
            << " boundary edges; system size " << layout.total() << '\n';

  try {
    std::filesystem::create_directories(config.output_dir);
  } catch (const std::exception& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  }
  const auto path = [&](const char* name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };

  try {
    State guess = rescale_to_perimeter(
        interpolate_guess(mesh, layout, config.guess), mesh, layout);
    write_vtu(guess, mesh, layout, path("guess.vtu"));

    auto [solution, report] = newton_solve(guess, config.problem, mesh, layout,
                                           config.solver, config.threads);

    write_iteration_log(report, path("iterations.csv"));
    write_vtu(solution, mesh, layout, path("solution.vtu"));
    const EnergyBreakdown energy =
        augmented_energy(solution, config.problem, mesh, layout, config.threads);
    const ShapeReport shape =
        constraint_report(solution, config.problem, mesh, layout);
    write_summary(report, energy, shape, path("summary.txt"));

    std::cout << "newton: " << termination_name(report.termination_reason)
              << " after " << report.iterations << " iterations, |residual| = "
              << report.residual_norms.back() << '\n';
    std::cout << "perimeter = " << shape.perimeter
              << ", max speed violation = " << shape.max_speed_violation
              << ", circularity = " << shape.circularity
              << ", planarity = " << shape.planarity << '\n';

    switch (report.termination_reason) {
      case Termination::linear_failure:
        return kExitLinearFailure;
      case Termination::line_search_failure:
        return kExitLineSearchFailure;
      case Termination::max_iterations:
        return kExitNoConvergence;
      case Termination::converged:
        break;
    }
    if (!constraints_pass(shape)) {
      std::cerr << "constraint thresholds failed (perimeter within "
                << kPerimeterTolerance << " of 2*pi, speed violation < "
                << kSpeedTolerance << ")\n";
      return kExitConstraints;
    }
    return kExitOk;
  } catch (const std::runtime_error& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  }
}

}  // namespace elastrim
