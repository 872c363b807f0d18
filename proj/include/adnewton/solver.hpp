#pragma once

// Newton-type iterations for F(u) = 0 with F = H' strongly monotone and
// Lipschitz: adaptively damped Newton, fixed-step damped Newton (classical
// Newton at delta = 1), and the Kacanov fixed-point scheme used to compute
// reference solutions.

#include "adnewton/fem.hpp"
#include "adnewton/linalg/vector.hpp"
#include "adnewton/operator.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adnewton {

struct SolverConfig {
  /// Backtracking factor, in (0, 1).
  double sigma = 0.8;
  /// Sufficient-decrease weight, in (0, 0.5].
  double theta = 0.1;
  std::size_t max_outer_iter = 100;
  /// 0 selects the smallest budget that reaches the damping floor from 1.
  std::size_t max_trials_per_step = 0;
  double linear_rel_tol = 1e-12;
  std::size_t linear_max_iter = 20000;
  double stop_update_norm = 1e-10;
  double stop_residual_rel = 1e-10;

  /// Throws UsageError when a parameter is out of range or the trial budget
  /// cannot reach the damping floor.
  void validate(double damping_floor) const;
  /// ceil(log(floor)/log(sigma)) + 2
  std::size_t min_trials(double damping_floor) const;
  std::size_t trial_budget(double damping_floor) const;
};

enum class Termination { converged, iteration_budget, trial_budget, linear_solve_failure, divergence };

std::string_view to_string(Termination t);

struct StepRecord {
  std::size_t iteration = 0;
  /// Damping parameter of the update that produced this iterate.
  double delta_used = 0.0;
  std::size_t trial_count = 0;
  /// H of this iterate.
  double potential_value = 0.0;
  /// ||u^{n-1} - u^n||_X
  double update_energy_norm = 0.0;
  /// ||u^n - reference||_X when a reference is supplied.
  std::optional<double> error_vs_reference;
  /// ||F(u^n)||_2 in coefficient form.
  double residual_norm = 0.0;
};

struct ConvergenceHistory {
  /// State of the initial guess (iteration 0; delta_used and trial_count are 0).
  StepRecord initial;
  /// One record per accepted update, iterations 1, 2, ...
  std::vector<StepRecord> records;
  Termination terminated = Termination::iteration_budget;
  std::string message;
  Vector solution;
};

/// Solves F'(u) rho = F(u) with Jacobi-preconditioned CG. Propagates
/// NonConvergenceError / NotSpdError from the linear solver.
Vector newton_direction(const OperatorProblem& p, const Vector& u, const SolverConfig& cfg);

struct AdaptiveStepResult {
  Vector u_next;
  /// The delta that generated u_next (before the line-6 style update).
  double delta_used;
  std::size_t trials;
  double potential_next;
  /// ||u - u_next||_X
  double update_norm;
  /// Every delta tried, in order; the last one is delta_used.
  std::vector<double> trial_deltas;
};

/// Sufficient-decrease test H(u) - H(u_next) >= theta min(alpha, L) ||u - u_next||^2.
/// Also accepts when both sides are below 1e-14 (1 + |H(u)|), where the
/// difference of potentials is pure round-off.
bool sufficient_decrease(double potential_before, double potential_after, double update_norm,
                         double theta, const StructuralConstants& c);

/// Backtracking from delta = 1: tries u - delta rho and, on rejection, sets
/// delta <- max(sigma delta, alpha/L). Throws TrialBudgetError when the
/// budget is exhausted. potential_u is H(u) (passed in to avoid recomputation).
AdaptiveStepResult adaptive_step(const OperatorProblem& p, const Vector& u, double potential_u,
                                 const Vector& rho, const SolverConfig& cfg);
AdaptiveStepResult adaptive_step(const OperatorProblem& p, const Vector& u, const Vector& rho,
                                 const SolverConfig& cfg);

ConvergenceHistory solve_adaptive(const OperatorProblem& p, const Vector& u0,
                                  const SolverConfig& cfg,
                                  const std::optional<Vector>& reference = std::nullopt);

/// Damped Newton with constant delta; delta = 1 is the classical scheme.
/// Terminates with Termination::divergence when an update is non-finite or
/// exceeds 1e6 times the first update norm.
ConvergenceHistory solve_fixed(const OperatorProblem& p, const Vector& u0, double delta,
                               const SolverConfig& cfg,
                               const std::optional<Vector>& reference = std::nullopt);

struct KacanovOptions {
  double tol = 1e-12;
  std::size_t max_iter = 10000;
  double linear_rel_tol = 1e-12;
  std::size_t linear_max_iter = 20000;
};

/// Kacanov iteration A(u^n) u^{n+1} = load with the coefficient frozen at u^n;
/// the history records every iterate (delta_used = 1, one trial).
/// Never throws on the iteration budget; check history.terminated.
ConvergenceHistory kacanov_iterate(const DiscreteProblem& p, const Vector& u0,
                                   const KacanovOptions& opts,
                                   const std::optional<Vector>& reference = std::nullopt);

/// Returns the Kacanov limit; throws NonConvergenceError if
/// ||u^{n+1} - u^n||_X <= tol is not reached within max_iter.
Vector solve_kacanov(const DiscreteProblem& p, const Vector& u0, double tol = 1e-12,
                     std::size_t max_iter = 10000);

/// Quadratic model of H(u - delta rho) - H(u):
/// delta^2/2 rho^T F'(u) rho - delta F(u).rho
double predicted_decay(const OperatorProblem& p, const Vector& u, const Vector& rho, double delta);

}  // namespace adnewton
