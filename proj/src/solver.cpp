#include "adnewton/solver.hpp"

#include "adnewton/error.hpp"
#include "adnewton/linalg/cg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adnewton {
namespace {

constexpr double kRoundoff = 1e-14;
constexpr double kDivergenceFactor = 1e6;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_dimension(const OperatorProblem& p, const Vector& u, const char* op) {
  if (u.size() != p.dimension())
    throw StructuralError(std::string(op) + ": initial guess has wrong length");
}

StepRecord make_record(const OperatorProblem& p, std::size_t iteration, double delta,
                       std::size_t trials, double potential_value, double update_norm,
                       const Vector& u, const Vector& r, const std::optional<Vector>& reference) {
  StepRecord rec;
  rec.iteration = iteration;
  rec.delta_used = delta;
  rec.trial_count = trials;
  rec.potential_value = potential_value;
  rec.update_energy_norm = update_norm;
  rec.residual_norm = norm2(r);
  if (reference) rec.error_vs_reference = p.norm(u - *reference);
  return rec;
}

bool residual_small(const OperatorProblem& p, double residual_norm, const SolverConfig& cfg) {
  return residual_norm <= cfg.stop_residual_rel * p.residual_scale();
}

// Shared outer loop. `step` maps (u, H(u), rho) to an accepted update and may
// throw TrialBudgetError.
template <class Step>
ConvergenceHistory newton_loop(const OperatorProblem& p, const Vector& u0, const SolverConfig& cfg,
                               const std::optional<Vector>& reference, bool guard_divergence,
                               Step step) {
  require_dimension(p, u0, "newton");
  if (reference) require_dimension(p, *reference, "newton");

  ConvergenceHistory h;
  Vector u = u0;
  double hu = p.potential(u);
  Vector r = p.residual(u);
  h.initial = make_record(p, 0, 0.0, 0, hu, 0.0, u, r, reference);

  auto finish = [&](Termination t, std::string msg) {
    h.terminated = t;
    h.message = std::move(msg);
    h.solution = u;
    return h;
  };

  if (residual_small(p, h.initial.residual_norm, cfg))
    return finish(Termination::converged, "initial residual below tolerance");

  double first_update = 0.0;
  for (std::size_t n = 1; n <= cfg.max_outer_iter; ++n) {
    Vector rho;
    try {
      rho = newton_direction(p, u, cfg);
    } catch (const NonConvergenceError& e) {
      return finish(Termination::linear_solve_failure, e.what());
    } catch (const NotSpdError& e) {
      return finish(Termination::linear_solve_failure, e.what());
    }

    AdaptiveStepResult s;
    try {
      s = step(u, hu, rho);
    } catch (const TrialBudgetError& e) {
      return finish(Termination::trial_budget, e.what());
    }

    if (guard_divergence) {
      if (n == 1) first_update = s.update_norm;
      if (!all_finite(s.u_next) || !std::isfinite(s.update_norm) ||
          s.update_norm > kDivergenceFactor * first_update) {
        return finish(Termination::divergence,
                      "update norm " + fmt(s.update_norm) + " at iteration " + std::to_string(n));
      }
    }

    u = std::move(s.u_next);
    hu = s.potential_next;
    r = p.residual(u);
    h.records.push_back(
        make_record(p, n, s.delta_used, s.trials, hu, s.update_norm, u, r, reference));

    const StepRecord& rec = h.records.back();
    if (!std::isfinite(rec.residual_norm) && guard_divergence)
      return finish(Termination::divergence, "non-finite residual");
    if (rec.update_energy_norm <= cfg.stop_update_norm || residual_small(p, rec.residual_norm, cfg))
      return finish(Termination::converged, "converged after " + std::to_string(n) + " iterations");
  }
  return finish(Termination::iteration_budget,
                "no convergence within " + std::to_string(cfg.max_outer_iter) + " iterations");
}

}  // namespace

std::size_t SolverConfig::min_trials(double damping_floor) const {
  if (damping_floor >= 1.0) return 2;
  return static_cast<std::size_t>(std::ceil(std::log(damping_floor) / std::log(sigma))) + 2;
}

std::size_t SolverConfig::trial_budget(double damping_floor) const {
  return max_trials_per_step == 0 ? min_trials(damping_floor) : max_trials_per_step;
}

void SolverConfig::validate(double damping_floor) const {
  if (!(sigma > 0.0 && sigma < 1.0)) throw UsageError("sigma must lie in (0, 1), got " + fmt(sigma));
  if (!(theta > 0.0 && theta <= 0.5)) throw UsageError("theta must lie in (0, 0.5], got " + fmt(theta));
  if (!(damping_floor > 0.0 && damping_floor <= 1.0))
    throw UsageError("damping floor must lie in (0, 1], got " + fmt(damping_floor));
  if (max_trials_per_step != 0 && max_trials_per_step < min_trials(damping_floor))
    throw UsageError("max_trials_per_step must be at least " +
                     std::to_string(min_trials(damping_floor)) + " to reach the damping floor");
  if (max_outer_iter == 0) throw UsageError("max_outer_iter must be positive");
  if (!(linear_rel_tol > 0.0)) throw UsageError("linear_rel_tol must be positive");
  if (!(stop_update_norm >= 0.0) || !(stop_residual_rel >= 0.0))
    throw UsageError("stopping tolerances must be non-negative");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::iteration_budget: return "iteration_budget";
    case Termination::trial_budget: return "trial_budget";
    case Termination::linear_solve_failure: return "linear_solve_failure";
    case Termination::divergence: return "divergence";
  }
  return "unknown";
}

Vector newton_direction(const OperatorProblem& p, const Vector& u, const SolverConfig& cfg) {
  const Vector r = p.residual(u);
  return cg_solve(p.jacobian(u), r, cfg.linear_rel_tol, cfg.linear_max_iter);
}

bool sufficient_decrease(double potential_before, double potential_after, double update_norm,
                         double theta, const StructuralConstants& c) {
  const double decay = potential_before - potential_after;
  const double required = theta * std::min(c.alpha_Fp, c.L) * update_norm * update_norm;
  if (decay >= required) return true;
  const double noise = kRoundoff * (1.0 + std::abs(potential_before));
  return std::abs(decay) <= noise && required <= noise;
}

AdaptiveStepResult adaptive_step(const OperatorProblem& p, const Vector& u, double potential_u,
                                 const Vector& rho, const SolverConfig& cfg) {
  const StructuralConstants& c = p.constants();
  cfg.validate(c.damping_floor);
  const std::size_t budget = cfg.trial_budget(c.damping_floor);

  AdaptiveStepResult res;
  double delta = 1.0;
  for (std::size_t trial = 1; trial <= budget; ++trial) {
    Vector next = u;
    axpy(-delta, rho, next);
    const double h_next = p.potential(next);
    const double step_norm = p.norm(u - next);
    res.trial_deltas.push_back(delta);
    if (sufficient_decrease(potential_u, h_next, step_norm, cfg.theta, c)) {
      res.u_next = std::move(next);
      res.delta_used = delta;
      res.trials = trial;
      res.potential_next = h_next;
      res.update_norm = step_norm;
      return res;
    }
    delta = std::max(cfg.sigma * delta, c.damping_floor);
  }
  throw TrialBudgetError("adaptive_step: no admissible step within " + std::to_string(budget) +
                         " trials (last delta " + fmt(res.trial_deltas.back()) + ")");
}

AdaptiveStepResult adaptive_step(const OperatorProblem& p, const Vector& u, const Vector& rho,
                                 const SolverConfig& cfg) {
  return adaptive_step(p, u, p.potential(u), rho, cfg);
}

ConvergenceHistory solve_adaptive(const OperatorProblem& p, const Vector& u0,
                                  const SolverConfig& cfg, const std::optional<Vector>& reference) {
  cfg.validate(p.constants().damping_floor);
  return newton_loop(p, u0, cfg, reference, false,
                     [&](const Vector& u, double hu, const Vector& rho) {
                       return adaptive_step(p, u, hu, rho, cfg);
                     });
}

ConvergenceHistory solve_fixed(const OperatorProblem& p, const Vector& u0, double delta,
                               const SolverConfig& cfg, const std::optional<Vector>& reference) {
  if (!(delta > 0.0)) throw UsageError("solve_fixed: delta must be positive, got " + fmt(delta));
  if (cfg.max_outer_iter == 0) throw UsageError("max_outer_iter must be positive");
  return newton_loop(p, u0, cfg, reference, true,
                     [&](const Vector& u, double, const Vector& rho) {
                       AdaptiveStepResult s;
                       s.u_next = u;
                       axpy(-delta, rho, s.u_next);
                       s.delta_used = delta;
                       s.trials = 1;
                       s.trial_deltas = {delta};
                       s.potential_next = p.potential(s.u_next);
                       s.update_norm = p.norm(u - s.u_next);
                       return s;
                     });
}

ConvergenceHistory kacanov_iterate(const DiscreteProblem& p, const Vector& u0,
                                   const KacanovOptions& opts,
                                   const std::optional<Vector>& reference) {
  if (!(opts.tol > 0.0)) throw UsageError("kacanov: tol must be positive");
  require_dimension(p, u0, "kacanov");

  ConvergenceHistory h;
  Vector u = u0;
  h.initial = make_record(p, 0, 0.0, 0, p.potential(u), 0.0, u, p.residual(u), reference);
  h.terminated = Termination::iteration_budget;
  for (std::size_t n = 1; n <= opts.max_iter; ++n) {
    Vector next;
    try {
      next = cg_solve(frozen_coefficient_matrix(p, u), p.load(), opts.linear_rel_tol,
                      opts.linear_max_iter);
    } catch (const NonConvergenceError& e) {
      h.terminated = Termination::linear_solve_failure;
      h.message = e.what();
      break;
    } catch (const NotSpdError& e) {
      h.terminated = Termination::linear_solve_failure;
      h.message = e.what();
      break;
    }
    const double update = p.norm(next - u);
    u = std::move(next);
    h.records.push_back(
        make_record(p, n, 1.0, 1, p.potential(u), update, u, p.residual(u), reference));
    if (update <= opts.tol) {
      h.terminated = Termination::converged;
      h.message = "converged after " + std::to_string(n) + " iterations";
      break;
    }
  }
  if (h.terminated == Termination::iteration_budget)
    h.message = "no convergence within " + std::to_string(opts.max_iter) + " iterations";
  h.solution = std::move(u);
  return h;
}

Vector solve_kacanov(const DiscreteProblem& p, const Vector& u0, double tol, std::size_t max_iter) {
  KacanovOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  ConvergenceHistory h = kacanov_iterate(p, u0, opts);
  if (h.terminated != Termination::converged) {
    const double last = h.records.empty() ? 0.0 : h.records.back().update_energy_norm;
    throw NonConvergenceError("solve_kacanov: " + h.message, last, h.records.size());
  }
  return std::move(h.solution);
}

double predicted_decay(const OperatorProblem& p, const Vector& u, const Vector& rho, double delta) {
  const double curvature = bilinear(p.jacobian(u), rho, rho);
  const double slope = dot(p.residual(u), rho);
  return 0.5 * delta * delta * curvature - delta * slope;
}

}  // namespace adnewton
