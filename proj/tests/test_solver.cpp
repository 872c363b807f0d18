#include "adnewton/error.hpp"
#include "adnewton/solver.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

namespace adnewton {
namespace {

using testing::ScalarOperator;
using testing::constants_for;

std::shared_ptr<const P1Space> square(std::size_t n) {
  return std::make_shared<const P1Space>(unit_square_mesh(n));
}

// H(u) = sqrt(1 + u^2) - 1 + 0.05 u^2; H'' ranges over (0.1, 1.1], so the
// full Newton step from far out overshoots badly.
ScalarOperator overshooting() {
  return ScalarOperator([](double u) { return std::sqrt(1 + u * u) - 1 + 0.05 * u * u; },
                        [](double u) { return u / std::sqrt(1 + u * u) + 0.1 * u; },
                        [](double u) { return std::pow(1 + u * u, -1.5) + 0.1; },
                        constants_for(0.1, 1.1));
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate(1.0 / 12));
  EXPECT_EQ(c.min_trials(1.0 / 12), static_cast<std::size_t>(std::ceil(std::log(1.0 / 12) / std::log(0.8))) + 2);
  c.sigma = 1.0;
  EXPECT_THROW(c.validate(0.5), UsageError);
  c = {};
  c.theta = 0.6;
  EXPECT_THROW(c.validate(0.5), UsageError);
  c = {};
  c.theta = 0.0;
  EXPECT_THROW(c.validate(0.5), UsageError);
  c = {};
  c.max_trials_per_step = 3;
  EXPECT_THROW(c.validate(1.0 / 12), UsageError);
  c = {};
  EXPECT_THROW(c.validate(0.0), UsageError);
  c.max_outer_iter = 0;
  EXPECT_THROW(c.validate(0.5), UsageError);
}

TEST(SolverConfig, TerminationNames) {
  EXPECT_EQ(to_string(Termination::converged), "converged");
  EXPECT_EQ(to_string(Termination::divergence), "divergence");
  EXPECT_EQ(to_string(Termination::trial_budget), "trial_budget");
}

TEST(SufficientDecrease, Threshold) {
  const StructuralConstants c = constants_for(0.5, 2.0);
  // theta min(alpha, L) ||d||^2 = 0.1 * 0.5 * 4 = 0.2
  EXPECT_TRUE(sufficient_decrease(1.0, 0.79, 2.0, 0.1, c));
  EXPECT_FALSE(sufficient_decrease(1.0, 0.81, 2.0, 0.1, c));
  // Round-off regime.
  EXPECT_TRUE(sufficient_decrease(1.0, 1.0 + 1e-15, 1e-8, 0.1, c));
  EXPECT_FALSE(sufficient_decrease(1.0, 1.0 + 1e-10, 1e-8, 0.1, c));
}

TEST(AdaptiveStep, QuadraticAcceptsFirstTrial) {
  const ScalarOperator q([](double u) { return 0.5 * u * u - u; }, [](double u) { return u - 1; },
                         [](double) { return 1.0; }, constants_for(1.0, 1.0));
  const Vector u{5.0};
  const SolverConfig cfg;
  const AdaptiveStepResult s = adaptive_step(q, u, newton_direction(q, u, cfg), cfg);
  EXPECT_EQ(s.trials, 1u);
  EXPECT_EQ(s.delta_used, 1.0);
  EXPECT_NEAR(s.u_next[0], 1.0, 1e-14);
  EXPECT_NEAR(s.potential_next, -0.5, 1e-14);
  EXPECT_NEAR(s.update_norm, 4.0, 1e-14);
}

TEST(AdaptiveStep, BacktrackingFollowsScriptedSequence) {
  const ScalarOperator p = overshooting();
  SolverConfig cfg;
  cfg.theta = 0.5;
  const double u = 3.0;
  const double rho = p.residual(Vector{u})[0] / p.jacobian(Vector{u}).at(0, 0);

  // Oracle: replay the backtracking rule by hand.
  std::vector<double> expected;
  const double floor = 0.1 / 1.1;
  double delta = 1.0;
  for (;;) {
    expected.push_back(delta);
    const double next = u - delta * rho;
    if (p.h(u) - p.h(next) >= cfg.theta * 0.1 * (delta * rho) * (delta * rho)) break;
    delta = std::max(cfg.sigma * delta, floor);
  }
  ASSERT_GT(expected.size(), 2u);

  const AdaptiveStepResult s = adaptive_step(p, Vector{u}, Vector{rho}, cfg);
  ASSERT_EQ(s.trial_deltas.size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_DOUBLE_EQ(s.trial_deltas[k], expected[k]);
  EXPECT_EQ(s.trials, expected.size());
  EXPECT_DOUBLE_EQ(s.delta_used, expected.back());
  EXPECT_NEAR(s.u_next[0], u - expected.back() * rho, 1e-15);
  EXPECT_LT(s.delta_used, 1.0);
  EXPECT_GE(s.delta_used, floor);
}

TEST(AdaptiveStep, TrialDeltasNeverDropBelowFloor) {
  const ScalarOperator p = overshooting();
  SolverConfig cfg;
  cfg.theta = 0.5;
  for (double u : {2.0, 3.0, 5.0, 10.0, 40.0}) {
    const Vector uv{u};
    const AdaptiveStepResult s = adaptive_step(p, uv, newton_direction(p, uv, cfg), cfg);
    for (std::size_t k = 0; k < s.trial_deltas.size(); ++k) {
      EXPECT_GE(s.trial_deltas[k], 0.1 / 1.1 - 1e-15);
      if (k > 0) {
        EXPECT_LE(s.trial_deltas[k], s.trial_deltas[k - 1]);
      }
    }
    EXPECT_LT(p.h(s.u_next[0]), p.h(u));
  }
}

TEST(AdaptiveStep, UphillPotentialExhaustsBudget) {
  // H inconsistent with F: every trial increases H.
  const ScalarOperator bad([](double u) { return -u * u; }, [](double u) { return u; },
                           [](double) { return 1.0; }, constants_for(0.5, 1.0));
  const SolverConfig cfg;
  const Vector u{1.0};
  EXPECT_THROW(adaptive_step(bad, u, Vector{1.0}, cfg), TrialBudgetError);
  const ConvergenceHistory h = solve_adaptive(bad, u, cfg);
  EXPECT_EQ(h.terminated, Termination::trial_budget);
  EXPECT_TRUE(h.records.empty());
}

TEST(AdaptiveSolver, ScalarProblemConvergesWithDecreasingPotential) {
  const ScalarOperator p = overshooting();
  SolverConfig cfg;
  cfg.theta = 0.5;
  const ConvergenceHistory h = solve_adaptive(p, Vector{20.0}, cfg);
  ASSERT_EQ(h.terminated, Termination::converged);
  EXPECT_NEAR(h.solution[0], 0.0, 1e-10);
  double prev = h.initial.potential_value;
  for (const StepRecord& r : h.records) {
    EXPECT_LE(r.potential_value, prev);
    prev = r.potential_value;
  }
  EXPECT_LT(h.records.front().delta_used, 1.0);
  EXPECT_EQ(h.records.back().delta_used, 1.0);
}

TEST(NewtonDirection, SatisfiesLinearizedEquation) {
  for (const ModelSetup& m : {model_experiment1(), model_experiment2()}) {
    const DiscreteProblem p(square(8), m, exact_solution());
    const Vector u = testing::random_vector(p.n_dofs());
    const Vector rho = newton_direction(p, u, SolverConfig{});
    const Vector r = p.residual(u);
    EXPECT_LE(norm2(matvec(p.jacobian(u), rho) - r), 1e-8 * norm2(r));
  }
}

TEST(LinearProblem, AllSchemesMatchDirectSolveInOneIteration) {
  const auto space = square(6);
  const DiscreteProblem p(space, constant_model(2.0), exact_solution());
  const auto k = testing::interior_block(
      space->mesh(), testing::full_stiffness_oracle(space->mesh(), [](std::size_t) { return 2.0; }));
  const Vector direct = testing::dense_solve(k, p.load());
  const Vector u0(p.n_dofs());
  const SolverConfig cfg;

  const ConvergenceHistory classical = solve_fixed(p, u0, 1.0, cfg, direct);
  const ConvergenceHistory adaptive = solve_adaptive(p, u0, cfg, direct);
  const ConvergenceHistory kacanov = kacanov_iterate(p, u0, KacanovOptions{}, direct);
  for (const ConvergenceHistory* h : {&classical, &adaptive, &kacanov}) {
    ASSERT_FALSE(h->records.empty());
    EXPECT_LE(*h->records.front().error_vs_reference, 1e-10);
    EXPECT_EQ(h->terminated, Termination::converged);
  }
  EXPECT_EQ(classical.records.size(), 1u);
  EXPECT_EQ(adaptive.records.size(), 1u);
  EXPECT_EQ(adaptive.records.front().trial_count, 1u);
}

TEST(AdaptiveSolver, StartingAtReferenceStopsImmediately) {
  const DiscreteProblem p(square(8), model_experiment1(), exact_solution());
  const Vector ref = solve_kacanov(p, Vector(p.n_dofs()));
  const ConvergenceHistory h = solve_adaptive(p, ref, SolverConfig{}, ref);
  EXPECT_EQ(h.terminated, Termination::converged);
  EXPECT_LE(h.records.size(), 1u);
  EXPECT_LE(p.norm(h.solution - ref), 1e-10);
}

TEST(AdaptiveSolver, HistoryInvariants) {
  const DiscreteProblem p(std::make_shared<const P1Space>(l_shape_mesh(6)), model_experiment1(),
                          exact_solution());
  const SolverConfig cfg;
  const ConvergenceHistory h = solve_adaptive(p, Vector(p.n_dofs()), cfg);
  ASSERT_EQ(h.terminated, Termination::converged);
  EXPECT_EQ(h.initial.iteration, 0u);
  EXPECT_EQ(h.initial.trial_count, 0u);
  double prev = h.initial.potential_value;
  const double floor = p.constants().damping_floor;
  for (std::size_t k = 0; k < h.records.size(); ++k) {
    const StepRecord& r = h.records[k];
    EXPECT_EQ(r.iteration, k + 1);
    EXPECT_GE(r.delta_used, floor);
    EXPECT_LE(r.delta_used, 1.0);
    EXPECT_GE(r.trial_count, 1u);
    EXPECT_LE(r.trial_count, cfg.trial_budget(floor));
    EXPECT_TRUE(sufficient_decrease(prev, r.potential_value, r.update_energy_norm, cfg.theta,
                                    p.constants()));
    prev = r.potential_value;
  }
}

TEST(PredictedDecay, EndpointsAndOptimum) {
  const DiscreteProblem p(square(8), model_experiment1(), exact_solution());
  const Vector u = testing::random_vector(p.n_dofs(), 0.5);
  const Vector rho = newton_direction(p, u, SolverConfig{});
  EXPECT_EQ(predicted_decay(p, u, rho, 0.0), 0.0);
  // At the Newton direction rho^T F'(u) rho = F(u).rho, so the model at 1 is -F.rho/2.
  const double slope = dot(p.residual(u), rho);
  EXPECT_NEAR(predicted_decay(p, u, rho, 1.0), -0.5 * slope, 1e-8 * std::abs(slope));
  double best = 1e300, arg = -1.0;
  for (int k = 0; k <= 200; ++k) {
    const double d = k / 100.0;
    const double v = predicted_decay(p, u, rho, d);
    if (v < best) best = v, arg = d;
  }
  EXPECT_DOUBLE_EQ(arg, 1.0);
}

TEST(Kacanov, PotentialNonIncreasingAndResidualSmall) {
  for (const ModelSetup& m : {model_experiment1(), model_experiment2()}) {
    const DiscreteProblem p(square(12), m, exact_solution());
    const ConvergenceHistory h = kacanov_iterate(p, Vector(p.n_dofs()), KacanovOptions{});
    ASSERT_EQ(h.terminated, Termination::converged) << m.model.name();
    double prev = h.initial.potential_value;
    for (const StepRecord& r : h.records) {
      EXPECT_LE(r.potential_value, prev + 1e-14 * (1 + std::abs(prev)));
      prev = r.potential_value;
    }
    EXPECT_LE(h.records.back().residual_norm, 1e-8 * norm2(p.load()));
  }
}

TEST(Kacanov, BudgetExhaustionThrows) {
  const DiscreteProblem p(square(8), model_experiment1(), exact_solution());
  try {
    solve_kacanov(p, Vector(p.n_dofs()), 1e-12, 2);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 2u);
    EXPECT_GT(e.achieved(), 1e-12);
  }
}

TEST(FixedSolver, DivergenceGuardTrips) {
  // F(u) = u^3 + u driven with an oversized step: the iterates blow up.
  const ScalarOperator p([](double u) { return 0.25 * u * u * u * u + 0.5 * u * u; },
                         [](double u) { return u * u * u + u; },
                         [](double u) { return 3 * u * u + 1; }, constants_for(1.0, 1.0));
  const ConvergenceHistory h = solve_fixed(p, Vector{1.0}, 8.0, SolverConfig{});
  EXPECT_EQ(h.terminated, Termination::divergence);
  EXPECT_THROW(solve_fixed(p, Vector{1.0}, 0.0, SolverConfig{}), UsageError);
}

TEST(FixedSolver, RejectsWrongDimension) {
  const DiscreteProblem p(square(4), model_experiment1(), exact_solution());
  EXPECT_THROW(solve_fixed(p, Vector(3), 1.0, SolverConfig{}), StructuralError);
  EXPECT_THROW(solve_adaptive(p, Vector(3), SolverConfig{}), StructuralError);
}

}  // namespace
}  // namespace adnewton
