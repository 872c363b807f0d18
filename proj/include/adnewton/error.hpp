#pragma once

#include <stdexcept>
#include <string>

namespace adnewton {

/// Malformed input: bad shapes, out-of-range indices, degenerate geometry.
class StructuralError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method ran out of iterations before meeting its tolerance.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, double achieved, std::size_t iterations)
      : std::runtime_error(what), achieved_(achieved), iterations_(iterations) {}

  /// Last measured value of the controlled quantity (residual, update norm, ...).
  double achieved() const noexcept { return achieved_; }
  std::size_t iterations() const noexcept { return iterations_; }

private:
  double achieved_;
  std::size_t iterations_;
};

/// The CG solver found a zero or negative diagonal entry.
class NotSpdError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The backtracking loop of the adaptive scheme ran out of trials.
class TrialBudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (solver parameters, CLI flags).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace adnewton
