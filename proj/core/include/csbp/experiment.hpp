#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csbp/config.hpp"
#include "csbp/decoder.hpp"

namespace csbp {

/// Parsed experiment description. Every list is a sweep axis; the points are
/// the cartesian product n x c_components x l x m x sigma_z2 in that nesting
/// order (first axis outermost).
struct ExperimentConfig {
  std::string experiment = "sweep";

  std::vector<std::size_t> n{1000};
  double s = 0.1;
  double sigma0 = 1.0;
  double sigma1 = 10.0;
  std::vector<int> c_components{2};

  std::vector<std::size_t> l{20};
  std::vector<std::size_t> m{400};
  bool regular_columns = false;
  std::uint64_t matrix_seed = 0;
  /// Timing runs use M = round(m_ratio * N).
  double m_ratio = 0.4;

  DecoderConfig decoder;
  /// Nonzero: explicit grid size spanning +-half_width sigma1.
  std::size_t grid_p = 0;

  std::vector<double> sigma_z2{0.0};

  std::size_t trials = 100;
  std::vector<std::string> algorithms{"csbp"};
  std::uint64_t base_seed = 1;
  /// IHT sparsity; 0 selects round(s n).
  std::size_t iht_k = 0;
  std::size_t iht_iters = 200;
  /// Median decoder group size; 0 selects the default.
  std::size_t median_m1 = 0;

  std::string output_path;
  /// When false the seconds column is written as 0 so output is reproducible.
  bool wall_time = false;
  std::size_t threads = 1;

  /// Reads a flat config; unknown keys and invalid values raise ConfigError.
  static ExperimentConfig from(const KeyValueConfig& kv, const std::string& experiment);

  /// Full consistency check (divisibility, exact-oracle size cap, ...);
  /// throws ConfigError.
  void validate() const;

  MixturePrior prior() const { return MixturePrior{s, sigma0, sigma1}; }
  /// Decoder settings for a given point (grid resolved, sigma_z2 applied).
  DecoderConfig decoder_for(double sigma_z2) const;
};

/// The set of keys an experiment config may contain.
const std::vector<std::string>& experiment_config_keys();

struct TrialRecord {
  std::string experiment;
  std::string algorithm;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t l = 0;
  double s = 0.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  double sigma_z2 = 0.0;
  int c_components = 2;
  std::string codec;
  /// >= 0 for trials; -1 median summary, -2 mean summary.
  long long trial = 0;
  std::uint64_t seed = 0;
  double l2_error = 0.0;
  double linf_error = 0.0;
  double iters = 0.0;
  double converged = 0.0;
  double seconds = 0.0;
};

std::string csv_header();
std::string csv_row(const TrialRecord& r);
void write_csv(std::ostream& os, const std::vector<TrialRecord>& rows);

/// Worker count: CSBP_THREADS if set, else cfg.threads. Always >= 1.
std::size_t resolve_threads(const ExperimentConfig& cfg);

/// Per-trial rows followed, for each point, by per-algorithm summaries
/// (trial -1 median, trial -2 mean when trials >= 2). Output ordering and
/// contents do not depend on the worker count.
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg);

/// Like run_sweep with multilevel signals and the two-state decoder prior;
/// c_components is the swept axis.
std::vector<TrialRecord> run_mismatch(const ExperimentConfig& cfg);

struct TimingResult {
  std::vector<TrialRecord> rows;
  /// Slope of log(median CS-BP seconds) against log N; NaN with < 2 points.
  double csbp_exponent = 0.0;
};

/// Sequential wall-time measurement over the n axis with M = round(m_ratio N).
TimingResult run_timing(const ExperimentConfig& cfg);

/// Least-squares slope of log(y) on log(x).
double fit_loglog_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Median of a nonempty sample (mean of the middle pair for even sizes).
double median_of(std::vector<double> v);

}  // namespace csbp
