#include "adnewton/error.hpp"
#include "adnewton/experiment.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adnewton {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig small(int experiment, std::vector<Scheme> schemes) {
  RunConfig cfg;
  cfg.experiment = experiment;
  cfg.mesh_n = 6;
  cfg.schemes = std::move(schemes);
  return cfg;
}

TEST(Scheme, ParseRoundTrip) {
  for (Scheme s : {Scheme::adaptive, Scheme::fixed, Scheme::classical, Scheme::kacanov})
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("newton"), UsageError);
  EXPECT_THROW(parse_scheme(""), UsageError);
}

TEST(RunConfig, DefaultsAndValidation) {
  RunConfig cfg;
  EXPECT_EQ(cfg.mesh_n, 32u);
  EXPECT_EQ(cfg.solver.sigma, 0.8);
  EXPECT_EQ(cfg.solver.theta, 0.1);
  EXPECT_NO_THROW(cfg.validate());
  cfg.experiment = 3;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg = {};
  cfg.fixed_delta = -1.0;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg = {};
  cfg.schemes.clear();
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg = {};
  cfg.mesh_n = 0;
  EXPECT_THROW(cfg.validate(), UsageError);
}

TEST(BuildExperiment, Setups) {
  const ExperimentSetup e1 = build_experiment(1, 4);
  EXPECT_EQ(e1.domain, "l-shape");
  EXPECT_EQ(norm2(e1.u0), 0.0);
  EXPECT_DOUBLE_EQ(e1.space->mesh().total_area(), 3.0);
  const ExperimentSetup e2 = build_experiment(2, 4);
  EXPECT_EQ(e2.domain, "unit-square");
  EXPECT_DOUBLE_EQ(e2.u0[4], 1.0);  // center vertex (0.5, 0.5)
  EXPECT_EQ(e2.problem->constants().L, 96.0);
  EXPECT_THROW(build_experiment(0, 4), UsageError);
}

TEST(Csv, WriteReadRoundTrip) {
  const ExperimentResult r = execute(small(1, {Scheme::adaptive, Scheme::fixed}));
  std::stringstream ss;
  write_csv(ss, r.runs);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "scheme,iteration,delta_used,trials,potential_value,update_energy_norm,residual_norm,"
            "error_vs_reference,terminated");
  const std::vector<CsvRow> rows = read_csv(ss);
  std::size_t expected = 0;
  for (const SchemeRun& run : r.runs) expected += 1 + run.history.records.size();
  ASSERT_EQ(rows.size(), expected);

  std::size_t k = 0;
  for (const SchemeRun& run : r.runs) {
    std::vector<StepRecord> all{run.history.initial};
    all.insert(all.end(), run.history.records.begin(), run.history.records.end());
    for (const StepRecord& rec : all) {
      const CsvRow& row = rows[k++];
      EXPECT_EQ(row.scheme, to_string(run.scheme));
      EXPECT_EQ(row.iteration, rec.iteration);
      EXPECT_EQ(row.trials, rec.trial_count);
      // 17 significant digits round-trip exactly.
      EXPECT_EQ(row.delta_used, rec.delta_used);
      EXPECT_EQ(row.potential_value, rec.potential_value);
      EXPECT_EQ(row.update_energy_norm, rec.update_energy_norm);
      EXPECT_EQ(row.residual_norm, rec.residual_norm);
      ASSERT_TRUE(row.error_vs_reference.has_value());
      EXPECT_EQ(*row.error_vs_reference, *rec.error_vs_reference);
      EXPECT_EQ(row.terminated, to_string(run.history.terminated));
    }
  }
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(read_csv(bad_header), StructuralError);
  std::istringstream short_row(
      "scheme,iteration,delta_used,trials,potential_value,update_energy_norm,residual_norm,"
      "error_vs_reference,terminated\nadaptive,1,1\n");
  EXPECT_THROW(read_csv(short_row), StructuralError);
}

TEST(Execute, FixedDefaultsToDampingFloor) {
  const ExperimentResult r = execute(small(1, {Scheme::fixed, Scheme::classical}));
  EXPECT_DOUBLE_EQ(r.runs[0].delta, 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(r.runs[1].delta, 1.0);
  for (const StepRecord& rec : r.runs[0].history.records) EXPECT_DOUBLE_EQ(rec.delta_used, 1.0 / 12.0);
}

TEST(Execute, KacanovSchemeReachesReference) {
  const ExperimentResult r = execute(small(2, {Scheme::kacanov}));
  const ConvergenceHistory& h = r.runs[0].history;
  EXPECT_EQ(h.terminated, Termination::converged);
  EXPECT_LE(*h.records.back().error_vs_reference, 1e-9);
}

TEST(Commands, SchemeCountChecks) {
  std::ostringstream out;
  EXPECT_THROW(compare(small(1, {Scheme::adaptive}), out), UsageError);
  EXPECT_THROW(run(small(1, {Scheme::adaptive, Scheme::classical}), out), UsageError);
}

TEST(Commands, RunIsDeterministicAndSummarized) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "adnewton_det_a.csv").string();
  const std::string b = (dir / "adnewton_det_b.csv").string();
  RunConfig cfg = small(1, {Scheme::adaptive, Scheme::fixed, Scheme::classical});
  std::ostringstream summary;
  cfg.output_path = a;
  ASSERT_EQ(compare(cfg, summary), 0);
  cfg.output_path = b;
  std::ostringstream ignored;
  ASSERT_EQ(compare(cfg, ignored), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());

  const std::string s = summary.str();
  EXPECT_NE(s.find("sigma=0.8"), std::string::npos);
  EXPECT_NE(s.find("theta=0.1"), std::string::npos);
  EXPECT_NE(s.find("mesh_n=6"), std::string::npos);
  EXPECT_NE(s.find("kernels="), std::string::npos);
  EXPECT_NE(s.find("csv: " + a), std::string::npos);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST(Commands, UnwritableOutputIsUsageError) {
  RunConfig cfg = small(1, {Scheme::adaptive});
  cfg.output_path = "/nonexistent-dir/x.csv";
  std::ostringstream out;
  EXPECT_THROW(run(cfg, out), UsageError);
}

}  // namespace
}  // namespace adnewton
