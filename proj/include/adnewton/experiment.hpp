#pragma once

#include "adnewton/fem.hpp"
#include "adnewton/solver.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adnewton {

enum class Scheme { adaptive, fixed, classical, kacanov };

std::string_view to_string(Scheme s);
/// Throws UsageError for an unknown name.
Scheme parse_scheme(std::string_view name);

struct RunConfig {
  int experiment = 1;
  std::size_t mesh_n = 32;
  std::vector<Scheme> schemes{Scheme::adaptive};
  /// Step size of the fixed scheme; defaults to the damping floor alpha/L.
  std::optional<double> fixed_delta;
  SolverConfig solver;
  double ref_tol = 1e-12;
  std::size_t ref_max_iter = 10000;
  /// CSV destination; empty selects experiment<N>_<scheme>.csv or
  /// experiment<N>_compare.csv in the working directory.
  std::string output_path;

  /// Throws UsageError.
  void validate() const;
};

/// Mesh, discrete problem and initial guess of one of the two experiments:
///   1: L-shape, rational mu, u0 = 0
///   2: unit square, Bercovier-Engelman mu, u0 = interpolant of sin(pi x) sin(pi y)
struct ExperimentSetup {
  int experiment;
  std::string domain;
  std::shared_ptr<const P1Space> space;
  std::shared_ptr<const DiscreteProblem> problem;
  Vector u0;
};

ExperimentSetup build_experiment(int experiment, std::size_t mesh_n);

struct SchemeRun {
  Scheme scheme;
  /// Fixed step size (fixed/classical), otherwise 0.
  double delta = 0.0;
  ConvergenceHistory history;
};

struct ExperimentResult {
  ExperimentSetup setup;
  Vector reference;
  std::size_t reference_iterations = 0;
  std::vector<SchemeRun> runs;
};

/// Builds the experiment, computes the Kacanov reference and runs every
/// requested scheme sequentially from the same initial guess.
ExperimentResult execute(const RunConfig& cfg);

/// Columns: scheme, iteration, delta_used, trials, potential_value,
/// update_energy_norm, residual_norm, error_vs_reference, terminated.
/// Reals are printed with 17 significant digits.
void write_csv(std::ostream& os, const std::vector<SchemeRun>& runs);

/// Parsed CSV row (used to audit histories after the fact).
struct CsvRow {
  std::string scheme;
  std::size_t iteration;
  double delta_used;
  std::size_t trials;
  double potential_value;
  double update_energy_norm;
  double residual_norm;
  std::optional<double> error_vs_reference;
  std::string terminated;
};

std::vector<CsvRow> read_csv(std::istream& is);

void write_summary(std::ostream& os, const RunConfig& cfg, const ExperimentResult& result);

/// Single-scheme run. Writes the CSV and a summary; returns the exit status.
int run(const RunConfig& cfg, std::ostream& summary);

/// Multi-scheme comparison written to one CSV with a scheme column.
/// Throws UsageError when fewer than two schemes are requested.
int compare(const RunConfig& cfg, std::ostream& summary);

}  // namespace adnewton
