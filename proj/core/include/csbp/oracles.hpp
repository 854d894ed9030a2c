#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "csbp/csldpc.hpp"
#include "csbp/signal_model.hpp"

namespace csbp {

/// Largest N accepted by exact_mmse (2^N state vectors are enumerated).
inline constexpr std::size_t kExactMaxN = 16;

struct ExactPosterior {
  std::vector<double> x_mmse;
  std::vector<double> q_post;
  /// Sum of the normalized state weights; 1 up to rounding.
  double weight_sum = 0.0;
};

/// Posterior mean and state marginals by enumerating every state vector.
/// Requires N <= kExactMaxN (SizeError) and sigma_z2 >= 1e-6 sigma0^2
/// (ParameterError); noiseless data must be approximated by a small variance.
ExactPosterior exact_mmse(const SparseSignMatrix& phi, std::span<const double> y,
                          const MixturePrior& prior, double sigma_z2);

struct IhtOptions {
  std::size_t iters = 200;
  std::size_t power_iters = 50;
  /// Stop early once the relative residual change falls below this.
  double stall_tol = 1e-10;
};

/// Iterative hard thresholding keeping the k largest magnitudes, step
/// 1 / ||Phi||_2^2. Ties keep the lower index. iters_run, when given,
/// receives the number of gradient steps taken.
std::vector<double> iht_decode(const SparseSignMatrix& phi, std::span<const double> y,
                               std::size_t k, const IhtOptions& opts = {},
                               std::size_t* iters_run = nullptr);

/// ||Phi||_2 by power iteration on Phi^T Phi from a fixed start vector.
double spectral_norm(const SparseSignMatrix& phi, std::size_t iters = 50);

/// max(8, floor(M / ceil(4 ln N))).
std::size_t default_median_group_rows(std::size_t m, std::size_t n);

/// Median-of-groups sketch decoder. Rows are split into floor(M / m1) groups of
/// m1 consecutive rows; the matrix and measurements are rescaled by sqrt(N/L)
/// so the entries have unit second moment. m1 == 0 selects the default.
std::vector<double> median_decode(const SparseSignMatrix& phi, std::span<const double> y,
                                  std::size_t m1 = 0);

struct BoundParams {
  double eta = 1.0;
  double gamma = 1.0;
  double mu = 1.0;
  double s = 0.1;
  double sigma0 = 1.0;
  double sigma1 = 10.0;
  std::size_t n = 1000;

  void validate() const;
};

struct BoundTerms {
  /// eta ln(S N^(1+gamma)) / S.
  double l = 0.0;
  /// 2K + (N - K)(sigma0 / sigma1)^2 with K = S N.
  double bracket = 0.0;
  /// (1 + 2/eta)(1 + gamma) / mu^2 * bracket * ln N; the hidden constant is omitted.
  double m_expr = 0.0;
  /// sqrt(2 ln(S N^(1+gamma)) / (S N)).
  double q_bound = 0.0;
};

BoundTerms theorem1_params(const BoundParams& bp);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for k successes out of n.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct BoundCheck {
  std::size_t violations = 0;
  double frequency = 0.0;
  Interval wilson;
  double bound = 0.0;
  /// The Wilson lower limit does not exceed the bound.
  bool pass = false;
};

struct NormBoundReport {
  std::size_t n = 0;
  double gamma = 0.0;
  std::size_t trials = 0;
  BoundCheck l2_lower;   ///< ||x||^2 < S N sigma1^2
  BoundCheck l2_upper;   ///< ||x||^2 > N [2 S sigma1^2 + (1 - S) sigma0^2]
  BoundCheck count;      ///< sum Q > 1.5 S N
  BoundCheck linf;       ///< ||x||_inf >= sqrt(2 ln(S N^(1+gamma))) sigma1
  /// Distance (in standard deviations of ||x||^2) between the mean and each
  /// l2 threshold; below 3 the asymptotic statements are not yet informative.
  double l2_lower_gap_sd = 0.0;
  double l2_upper_gap_sd = 0.0;
  bool out_of_regime = false;

  bool all_pass() const noexcept {
    return l2_lower.pass && l2_upper.pass && count.pass && linf.pass;
  }
};

/// Monte Carlo frequencies of the four norm events. trials >= 1000.
NormBoundReport validate_norm_bounds(const MixturePrior& prior, std::size_t n, double gamma,
                                     std::size_t trials, std::uint64_t seed);

struct DoublingLevel {
  std::size_t m = 0;
  std::size_t successes = 0;
  double rate = 0.0;
};

struct DoublingReport {
  std::size_t l = 0;
  double target = 0.0;
  std::vector<DoublingLevel> levels;
  /// Doublings applied before the target rate was first met; valid when found.
  std::size_t doublings = 0;
  bool found = false;
};

/// Starting from M = ceil(S N log2 N), doubles M until the median decoder
/// achieves ||x_hat - x||_inf < mu sigma1 in at least 1 - 2 N^-gamma of the
/// trials, or max_doublings is exceeded. Row weight from theorem1_params
/// (rounded); rows only, no column regularity; noiseless.
DoublingReport median_doubling_search(const MixturePrior& prior, std::size_t n, double gamma,
                                      double eta, double mu, std::size_t trials,
                                      std::size_t max_doublings, std::uint64_t seed);

}  // namespace csbp
