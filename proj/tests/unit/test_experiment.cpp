#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "csbp/config.hpp"
#include "csbp/error.hpp"
#include "csbp/experiment.hpp"

using namespace csbp;

namespace {

ExperimentConfig small_config(const std::string& extra = "", const std::string& experiment = "sweep") {
  return ExperimentConfig::from(KeyValueConfig::parse("model.n = 60\nmatrix.l = 6\nmatrix.m = 30, 40\n"
                                                      "run.trials = 5\nrun.algorithms = csbp, iht, median\n"
                                                      "decoder.max_iters = 4\n" + extra),
                                experiment);
}

std::string to_csv(const std::vector<TrialRecord>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

TEST(Experiment, HeaderColumns) {
  EXPECT_EQ(csv_header(),
            "experiment,algorithm,n,m,l,s,sigma0,sigma1,sigma_z2,c_components,codec,trial,seed,"
            "l2_error,linf_error,iters,converged,seconds");
}

TEST(Experiment, SingleTrialEmitsOneTrialAndOneSummaryRow) {
  const auto cfg = ExperimentConfig::from(
      KeyValueConfig::parse("model.n = 40\nmatrix.l = 4\nmatrix.m = 20\nrun.trials = 1\n"), "sweep");
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].trial, 0);
  EXPECT_EQ(rows[1].trial, -1);
  EXPECT_EQ(rows[1].l2_error, rows[0].l2_error);
}

TEST(Experiment, SummariesAreOrderStatisticsOfTrialRows) {
  const auto rows = run_sweep(small_config());
  std::map<std::tuple<std::string, std::size_t>, std::vector<double>> trials;
  std::map<std::tuple<std::string, std::size_t>, double> medians;
  for (const auto& r : rows) {
    EXPECT_GE(r.l2_error, 0.0);
    const auto key = std::tuple(r.algorithm, r.m);
    if (r.trial >= 0) trials[key].push_back(r.l2_error);
    if (r.trial == -1) medians[key] = r.l2_error;
  }
  ASSERT_EQ(medians.size(), 6u);
  for (auto& [key, v] : trials) {
    ASSERT_EQ(v.size(), 5u);
    std::sort(v.begin(), v.end());
    EXPECT_EQ(medians[key], v[2]);
  }
}

TEST(Experiment, AlgorithmsShareInstancesWithinTrial) {
  // Seeds are recorded per trial row and must coincide across algorithms.
  const auto rows = run_sweep(small_config());
  std::map<std::tuple<std::size_t, long long>, std::uint64_t> seed;
  for (const auto& r : rows) {
    if (r.trial < 0) continue;
    const auto key = std::tuple(r.m, r.trial);
    if (seed.count(key)) {
      EXPECT_EQ(seed[key], r.seed);
    } else {
      seed[key] = r.seed;
    }
  }
}

TEST(Experiment, ByteIdenticalAcrossThreadCounts) {
  const auto one = to_csv(run_sweep(small_config("run.threads = 1\n")));
  EXPECT_EQ(one, to_csv(run_sweep(small_config("run.threads = 3\n"))));
  EXPECT_EQ(one, to_csv(run_sweep(small_config("run.threads = 1\n"))));
  setenv("CSBP_THREADS", "4", 1);
  EXPECT_EQ(resolve_threads(small_config()), 4u);
  EXPECT_EQ(one, to_csv(run_sweep(small_config())));
  unsetenv("CSBP_THREADS");
}

TEST(Experiment, ConfigErrors) {
  auto from = [](const std::string& text) {
    return ExperimentConfig::from(KeyValueConfig::parse(text), "sweep");
  };
  try {
    from("model.n = 100\nmodel.bogus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.bogus"), std::string::npos);
  }
  EXPECT_THROW(from("model.n = 100\nmatrix.l = 3\nmatrix.m = 10\nmatrix.regular_columns = true\n"), ConfigError);
  EXPECT_THROW(from("model.n = 20\nmatrix.l = 3\nmatrix.m = 10\nrun.algorithms = exact\n"), ConfigError);
  EXPECT_THROW(from("model.n = 12\nmatrix.l = 3\nmatrix.m = 6\nrun.trials = 0\n"), ConfigError);
  EXPECT_THROW(from("model.n = 12\nmatrix.l = 3\nmatrix.m = 6\nrun.algorithms = lp\n"), ConfigError);
  EXPECT_THROW(from("matrix.m =\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from(KeyValueConfig::parse("model.s = 0.3\nmodel.c_components = 5\n"), "mismatch"),
               ConfigError);
  EXPECT_NO_THROW(from("model.n = 12\nmatrix.l = 3\nmatrix.m = 6\nrun.algorithms = exact\n"));
}

TEST(Experiment, MismatchTwoComponentsMatchesSweep) {
  const std::string text = "model.n = 80\nmatrix.l = 8\nmatrix.m = 40\nrun.trials = 4\ndecoder.max_iters = 5\n";
  auto mcfg = ExperimentConfig::from(KeyValueConfig::parse(text + "model.c_components = 2\n"), "mismatch");
  const auto sweep = run_sweep(ExperimentConfig::from(KeyValueConfig::parse(text), "sweep"));
  const auto mism = run_mismatch(mcfg);
  std::vector<double> a, b;
  for (const auto& r : sweep) {
    if (r.algorithm == "csbp" && r.trial >= 0) a.push_back(r.l2_error);
  }
  for (const auto& r : mism) {
    if (r.algorithm == "csbp" && r.trial >= 0) b.push_back(r.l2_error);
  }
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6 * (1 + a[i]));
}

TEST(Experiment, TimingSinglePointOneRowPerAlgorithm) {
  const auto cfg = ExperimentConfig::from(
      KeyValueConfig::parse("model.n = 100\nmatrix.l = 10\nrun.trials = 1\nrun.algorithms = csbp, iht\n"
                            "decoder.max_iters = 2\n"),
      "timing");
  const auto t = run_timing(cfg);
  std::size_t trial_rows = 0;
  for (const auto& r : t.rows) {
    if (r.trial >= 0) {
      ++trial_rows;
      EXPECT_GT(r.seconds, 0.0);
      EXPECT_EQ(r.m, 40u);
    }
  }
  EXPECT_EQ(trial_rows, 2u);
  EXPECT_TRUE(std::isnan(t.csbp_exponent));
}

TEST(Experiment, LogLogFitAndMedian) {
  EXPECT_NEAR(fit_loglog_exponent({1, 2, 4, 8}, {3, 12, 48, 192}), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(median_of({5, 1, 3}), 3.0);
  EXPECT_DOUBLE_EQ(median_of({4, 1, 3, 2}), 2.5);
}
