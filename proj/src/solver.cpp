#include "elastrim/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "elastrim/errors.hpp"

namespace elastrim {

std::string termination_name(Termination reason) {
  switch (reason) {
    case Termination::converged: return "converged";
    case Termination::max_iterations: return "max_iterations";
    case Termination::linear_failure: return "linear_failure";
    case Termination::line_search_failure: return "line_search_failure";
  }
  return "?";
}

VecX solve_linear(const SparseMat& J, const VecX& rhs) {
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(J);
  lu.factorize(J);
  if (lu.info() != Eigen::Success)
    throw LinearSolveError("sparse LU factorization failed: " +
                           lu.lastErrorMessage());
  VecX x = lu.solve(rhs);
  // One refinement step keeps the solve residual tight on ill-scaled
  // saddle-point systems.
  const double rhs_norm = rhs.norm();
  if (rhs_norm > 0.0) {
    const VecX defect = rhs - J * x;
    if (defect.norm() > 1e-13 * rhs_norm) x += lu.solve(defect);
  }
  if (!x.allFinite())
    throw LinearSolveError("sparse LU produced non-finite solution "
                           "(numerically singular matrix)");
  return x;
}

double line_search_cubic(const std::function<double(double)>& merit,
                         double merit0, double g0, const SolverConfig& config) {
  if (!(g0 < 0.0))
    throw LineSearchError("line search requires a descent direction (g0 < 0)");

  const double c1 = config.ls_sufficient_decrease;
  double lambda = 1.0;
  double phi = merit(lambda);
  if (phi <= merit0 + c1 * lambda * g0) return lambda;

  // First backtrack: minimizer of the quadratic model through
  // (0, merit0, g0) and (lambda, phi).
  double lambda_prev = lambda;
  double phi_prev = phi;
  double next = -g0 * lambda * lambda / (2.0 * (phi - merit0 - g0 * lambda));
  next = std::clamp(next, 0.1 * lambda, 0.5 * lambda);

  for (int back = 1; back <= config.ls_max_backtracks; ++back) {
    lambda = next;
    if (lambda < config.ls_min_step)
      throw LineSearchError("line search step below minimum");
    phi = merit(lambda);
    if (phi <= merit0 + c1 * lambda * g0) return lambda;

    // Cubic model through (0, merit0, g0) and the last two trials.
    const double r1 = phi - merit0 - g0 * lambda;
    const double r2 = phi_prev - merit0 - g0 * lambda_prev;
    const double denom = lambda - lambda_prev;
    const double l1sq = lambda * lambda;
    const double l2sq = lambda_prev * lambda_prev;
    const double a = (r1 / l1sq - r2 / l2sq) / denom;
    const double b = (-lambda_prev * r1 / l1sq + lambda * r2 / l2sq) / denom;
    double candidate;
    if (std::abs(a) < 1e-30) {
      candidate = -g0 / (2.0 * b);  // quadratic fallback
    } else {
      const double disc = b * b - 3.0 * a * g0;
      candidate = disc > 0.0 ? (-b + std::sqrt(disc)) / (3.0 * a)
                             : 0.5 * lambda;
    }
    if (!std::isfinite(candidate)) candidate = 0.5 * lambda;
    lambda_prev = lambda;
    phi_prev = phi;
    next = std::clamp(candidate, 0.1 * lambda, 0.5 * lambda);
  }
  throw LineSearchError("line search exhausted its backtracks");
}

namespace {

// The saddle Jacobian is singular along symmetry orbits: with the identity
// tensor every energy term is invariant under ambient rotations X -> R X,
// so critical points carry a 3-dim kernel, and states whose boundary trace
// is affine on every edge (the disc and ellipse guesses interpolate linear
// maps exactly) leave a quadratic multiplier mode unseen by the constraint
// derivative. The residual is orthogonal to all of these modes, so a
// Levenberg-style shift proportional to |F| (positive on the membrane
// block, negative on the multiplier block) keeps the factorization
// well-posed, returns the clean direction along the kernel, and vanishes
// fast enough to preserve superlinear convergence. When the damped
// direction is not genuine descent for the merit, or its line search
// fails, the shift is escalated and the step re-solved.
constexpr double kDampingFactor = 1e-2;
constexpr double kDampingFloor = 1e-10;
constexpr double kDampingEscalation = 30.0;
// Beyond this shift the signed damping degenerates (the merit slope of its
// limit direction vanishes), so escalation stops here and the step falls
// back to the scaled merit-gradient (Cauchy) direction, which is descent
// whenever the merit gradient J F is nonzero.
constexpr double kDampingCap = 1e2;
constexpr int kMaxDampingTries = 5;

SparseMat damped_system(const SparseMat& J, long membrane_total, double tau) {
  SparseMat S(J.rows(), J.cols());
  std::vector<Triplet> shift;
  shift.reserve(J.rows());
  for (long i = 0; i < J.rows(); ++i)
    shift.emplace_back(i, i, i < membrane_total ? tau : -tau);
  S.setFromTriplets(shift.begin(), shift.end());
  return J + S;
}

}  // namespace

std::pair<State, NewtonReport> newton_solve(const State& initial,
                                            const Problem& problem,
                                            const Mesh& mesh,
                                            const DofLayout& layout,
                                            const SolverConfig& config,
                                            int threads) {
  State state = initial;
  NewtonReport report;

  VecX res = residual(state, problem, mesh, layout, threads);
  double norm = res.norm();
  report.residual_norms.push_back(norm);
  const double tol = std::max(config.abs_tol, config.rel_tol * norm);

  if (norm <= tol) {
    report.converged = true;
    report.termination_reason = Termination::converged;
    return {state, report};
  }

  // tau_hint carries the damping across iterations: it decays after healthy
  // steps and grows when the line search only accepts collapsed steps,
  // which keeps the iteration out of the huge-direction/tiny-step spiral on
  // rugged merit landscapes.
  double tau_hint = 0.0;
  for (int it = 1; it <= config.max_iters; ++it) {
    SparseMat J;
    try {
      J = jacobian(state, problem, mesh, layout, threads);
    } catch (const std::exception&) {
      report.termination_reason = Termination::linear_failure;
      return {state, report};
    }

    const double merit0 = 0.5 * norm * norm;
    double tau = std::max(
        {kDampingFloor, std::min(kDampingFactor * norm, 1e-2), tau_hint});
    bool accepted = false;
    bool solver_broke = false;
    double step = 0.0;
    VecX direction, next_res;

    // Cache trial evaluations so the accepted step is not re-assembled.
    double cached_step = -1.0;
    VecX cached_res;
    const auto merit = [&](double s) {
      State trial = state;
      trial.x += s * direction.head(layout.membrane_total);
      trial.l += s * direction.tail(layout.multiplier_total);
      cached_res = residual(trial, problem, mesh, layout, threads);
      cached_step = s;
      return 0.5 * cached_res.squaredNorm();
    };
    const auto try_direction = [&](double g0) {
      cached_step = -1.0;
      try {
        step = line_search_cubic(merit, merit0, g0, config);
      } catch (const LineSearchError&) {
        return false;
      }
      accepted = true;
      if (cached_step == step)
        next_res = cached_res;
      else {
        State trial = state;
        trial.x += step * direction.head(layout.membrane_total);
        trial.l += step * direction.tail(layout.multiplier_total);
        next_res = residual(trial, problem, mesh, layout, threads);
      }
      return true;
    };

    for (int attempt = 0;
         attempt < kMaxDampingTries && tau <= kDampingCap && !accepted;
         ++attempt) {
      try {
        direction = solve_linear(damped_system(J, layout.membrane_total, tau),
                                 -res);
      } catch (const LinearSolveError&) {
        solver_broke = true;
        tau *= kDampingEscalation;
        continue;
      }
      solver_broke = false;

      // Honest merit slope through the true Jacobian.
      const double g0 = res.dot(J * direction);
      if (!(g0 < 0.0) || !try_direction(g0)) tau *= kDampingEscalation;
    }

    if (!accepted) {
      // Cauchy fallback: steepest descent on the merit, prescaled so the
      // quadratic model along it is minimized near step one.
      const VecX grad = J * res;  // gradient of 0.5 |F|^2 (J symmetric)
      const double gnorm2 = grad.squaredNorm();
      const VecX jg = J * grad;
      if (gnorm2 > 0.0 && jg.squaredNorm() > 0.0) {
        direction = -(gnorm2 / jg.squaredNorm()) * grad;
        const double g0 = res.dot(J * direction);
        if (g0 < 0.0) try_direction(g0);
      }
    }
    if (!accepted) {
      report.termination_reason = solver_broke ? Termination::linear_failure
                                               : Termination::line_search_failure;
      return {state, report};
    }
    // The boost after a collapsed step is transient: healthy steps decay it
    // back toward the |F|-proportional baseline within a few iterations.
    if (step < 0.02)
      tau_hint = std::min(kDampingEscalation * tau, kDampingCap);
    else
      tau_hint = 0.1 * tau;

    state.x += step * direction.head(layout.membrane_total);
    state.l += step * direction.tail(layout.multiplier_total);
    res = std::move(next_res);
    norm = res.norm();

    // Set ELASTRIM_NEWTON_TRACE for a per-iteration monitor on stderr.
    static const bool trace = std::getenv("ELASTRIM_NEWTON_TRACE") != nullptr;
    if (trace)
      std::fprintf(stderr,
                   "newton it %3d  |F| %.6e  step %.3e  tau %.3e  |d| %.3e\n",
                   it, norm, step, tau, direction.norm());

    report.iterations = it;
    report.residual_norms.push_back(norm);
    report.step_lengths.push_back(step);

    if (norm <= tol) {
      report.converged = true;
      report.termination_reason = Termination::converged;
      return {state, report};
    }
  }

  report.termination_reason = Termination::max_iterations;
  return {state, report};
}

}  // namespace elastrim
