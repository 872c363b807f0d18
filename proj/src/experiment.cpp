#include "adnewton/experiment.hpp"

#include "adnewton/error.hpp"
#include "adnewton/linalg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace adnewton {
namespace {

const char* const kCsvHeader =
    "scheme,iteration,delta_used,trials,potential_value,update_energy_norm,residual_norm,"
    "error_vs_reference,terminated";

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double scheme_delta(Scheme s, const RunConfig& cfg, const StructuralConstants& c) {
  switch (s) {
    case Scheme::fixed: return cfg.fixed_delta.value_or(c.damping_floor);
    case Scheme::classical: return 1.0;
    default: return 0.0;
  }
}

std::string default_output(const RunConfig& cfg) {
  const std::string stem = "experiment" + std::to_string(cfg.experiment) + "_";
  if (cfg.schemes.size() == 1) return stem + std::string(to_string(cfg.schemes.front())) + ".csv";
  return stem + "compare.csv";
}

void write_csv_file(const RunConfig& cfg, const ExperimentResult& result, std::ostream& summary) {
  const std::string path = cfg.output_path.empty() ? default_output(cfg) : cfg.output_path;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  write_csv(out, result.runs);
  summary << "csv: " << path << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::adaptive: return "adaptive";
    case Scheme::fixed: return "fixed";
    case Scheme::classical: return "classical";
    case Scheme::kacanov: return "kacanov";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::adaptive, Scheme::fixed, Scheme::classical, Scheme::kacanov})
    if (name == to_string(s)) return s;
  throw UsageError("unknown scheme '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (experiment != 1 && experiment != 2)
    throw UsageError("experiment must be 1 or 2, got " + std::to_string(experiment));
  if (mesh_n == 0) throw UsageError("mesh-n must be at least 1");
  if (schemes.empty()) throw UsageError("at least one scheme is required");
  if (fixed_delta && !(*fixed_delta > 0.0)) throw UsageError("fixed-delta must be positive");
  if (!(ref_tol > 0.0)) throw UsageError("ref-tol must be positive");
  // The floor depends on the model; both experiments have floors well inside (0, 1].
  solver.validate(experiment == 1 ? model_experiment1().constants.damping_floor
                                   : model_experiment2().constants.damping_floor);
}

ExperimentSetup build_experiment(int experiment, std::size_t mesh_n) {
  ExperimentSetup s;
  s.experiment = experiment;
  const ManufacturedSolution exact = exact_solution();
  if (experiment == 1) {
    s.domain = "l-shape";
    s.space = std::make_shared<const P1Space>(l_shape_mesh(mesh_n));
    s.problem = std::make_shared<const DiscreteProblem>(s.space, model_experiment1(), exact);
    s.u0 = Vector(s.space->n_dofs());
  } else if (experiment == 2) {
    s.domain = "unit-square";
    s.space = std::make_shared<const P1Space>(unit_square_mesh(mesh_n));
    // Same source g as experiment 1: the weak divergence of the rational-law
    // flux of sin(pi x) sin(pi y).
    s.problem = std::make_shared<const DiscreteProblem>(
        s.space, model_experiment2(), load_vector(*s.space, model_experiment1().model, exact));
    s.u0 = s.space->interpolate(exact.value);
  } else {
    throw UsageError("experiment must be 1 or 2");
  }
  return s;
}

ExperimentResult execute(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.setup = build_experiment(cfg.experiment, cfg.mesh_n);
  const DiscreteProblem& p = *result.setup.problem;

  KacanovOptions ref_opts;
  ref_opts.tol = cfg.ref_tol;
  ref_opts.max_iter = cfg.ref_max_iter;
  ref_opts.linear_rel_tol = cfg.solver.linear_rel_tol;
  ref_opts.linear_max_iter = cfg.solver.linear_max_iter;
  ConvergenceHistory ref = kacanov_iterate(p, result.setup.u0, ref_opts);
  if (ref.terminated != Termination::converged)
    throw NonConvergenceError("reference solution: " + ref.message,
                              ref.records.empty() ? 0.0 : ref.records.back().update_energy_norm,
                              ref.records.size());
  result.reference = std::move(ref.solution);
  result.reference_iterations = ref.records.size();

  for (Scheme s : cfg.schemes) {
    SchemeRun r{s, scheme_delta(s, cfg, p.constants()), {}};
    switch (s) {
      case Scheme::adaptive:
        r.history = solve_adaptive(p, result.setup.u0, cfg.solver, result.reference);
        break;
      case Scheme::fixed:
      case Scheme::classical:
        r.history = solve_fixed(p, result.setup.u0, r.delta, cfg.solver, result.reference);
        break;
      case Scheme::kacanov: {
        KacanovOptions opts = ref_opts;
        opts.max_iter = cfg.solver.max_outer_iter;
        opts.tol = cfg.solver.stop_update_norm;
        r.history = kacanov_iterate(p, result.setup.u0, opts, result.reference);
        break;
      }
    }
    result.runs.push_back(std::move(r));
  }
  return result;
}

void write_csv(std::ostream& os, const std::vector<SchemeRun>& runs) {
  os << kCsvHeader << '\n';
  for (const SchemeRun& run : runs) {
    const std::string_view name = to_string(run.scheme);
    const std::string_view term = to_string(run.history.terminated);
    auto row = [&](const StepRecord& r) {
      os << name << ',' << r.iteration << ',' << real(r.delta_used) << ',' << r.trial_count << ','
         << real(r.potential_value) << ',' << real(r.update_energy_norm) << ','
         << real(r.residual_norm) << ','
         << (r.error_vs_reference ? real(*r.error_vs_reference) : std::string()) << ',' << term
         << '\n';
    };
    row(run.history.initial);
    for (const StepRecord& r : run.history.records) row(r);
  }
}

std::vector<CsvRow> read_csv(std::istream& is) {
  std::vector<CsvRow> rows;
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw StructuralError("read_csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw StructuralError("read_csv: expected 9 fields in '" + line + "'");
    CsvRow r;
    r.scheme = f[0];
    r.iteration = std::stoul(f[1]);
    r.delta_used = std::stod(f[2]);
    r.trials = std::stoul(f[3]);
    r.potential_value = std::stod(f[4]);
    r.update_energy_norm = std::stod(f[5]);
    r.residual_norm = std::stod(f[6]);
    if (!f[7].empty()) r.error_vs_reference = std::stod(f[7]);
    r.terminated = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary(std::ostream& os, const RunConfig& cfg, const ExperimentResult& result) {
  const DiscreteProblem& p = *result.setup.problem;
  const StructuralConstants& c = p.constants();
  os << "experiment " << cfg.experiment << " (" << result.setup.domain << ", " << p.model().name()
     << ")\n"
     << "  mesh_n=" << cfg.mesh_n << " triangles=" << p.mesh().n_triangles()
     << " dofs=" << p.n_dofs() << '\n'
     << "  sigma=" << cfg.solver.sigma << " theta=" << cfg.solver.theta
     << " stop_update=" << cfg.solver.stop_update_norm
     << " stop_residual=" << cfg.solver.stop_residual_rel << " max_iter=" << cfg.solver.max_outer_iter
     << '\n'
     << "  m_mu=" << p.model().m_mu() << " M_mu=" << p.model().M_mu() << " L=" << c.L
     << " alpha_Fp=" << c.alpha_Fp << " beta_Fp=" << c.beta_Fp << " nu=" << c.nu
     << " floor=" << c.damping_floor << '\n'
     << "  kernels=" << kernels::backend_name(kernels::active().backend) << '\n'
     << "  reference: kacanov, " << result.reference_iterations << " iterations, tol "
     << cfg.ref_tol << '\n';
  for (const SchemeRun& run : result.runs) {
    const ConvergenceHistory& h = run.history;
    os << to_string(run.scheme);
    if (run.scheme == Scheme::fixed || run.scheme == Scheme::classical)
      os << " (delta=" << run.delta << ")";
    os << ": terminated=" << to_string(h.terminated) << " iterations=" << h.records.size();
    const StepRecord& last = h.records.empty() ? h.initial : h.records.back();
    if (last.error_vs_reference) os << " final_error=" << *last.error_vs_reference;
    if (h.initial.error_vs_reference && !h.records.empty()) {
      double best = *h.initial.error_vs_reference;
      for (const StepRecord& r : h.records)
        if (r.error_vs_reference) best = std::min(best, *r.error_vs_reference);
      os << " initial_error=" << *h.initial.error_vs_reference << " best_error=" << best;
    }
    if (run.scheme == Scheme::adaptive) {
      const auto damped = std::count_if(h.records.begin(), h.records.end(),
                                        [](const StepRecord& r) { return r.delta_used < 1.0; });
      os << " damped_steps=" << damped;
    }
    os << '\n';
    if (!h.message.empty()) os << "  " << h.message << '\n';
  }
}

int run(const RunConfig& cfg, std::ostream& summary) {
  if (cfg.schemes.size() != 1) throw UsageError("run expects exactly one scheme");
  const ExperimentResult result = execute(cfg);
  write_summary(summary, cfg, result);
  write_csv_file(cfg, result, summary);
  return 0;
}

int compare(const RunConfig& cfg, std::ostream& summary) {
  if (cfg.schemes.size() < 2) throw UsageError("compare needs at least two schemes");
  const ExperimentResult result = execute(cfg);
  write_summary(summary, cfg, result);
  write_csv_file(cfg, result, summary);
  return 0;
}

}  // namespace adnewton
