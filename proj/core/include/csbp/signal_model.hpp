#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace csbp {

/// Two-state mixture Gaussian prior: N(0, sigma1^2) with probability s,
/// N(0, sigma0^2) otherwise.
struct MixturePrior {
  double s = 0.1;
  double sigma0 = 1.0;
  double sigma1 = 10.0;

  /// Throws ParameterError unless 0 < s < 1 and 0 < sigma0 < sigma1.
  void validate() const;

  /// E[X^2] = s sigma1^2 + (1 - s) sigma0^2.
  double second_moment() const noexcept {
    return s * sigma1 * sigma1 + (1.0 - s) * sigma0 * sigma0;
  }
};

/// C-component model: every coefficient carries N(0, sigma0^2) background and,
/// independently for each level c in 1..C-1 with probability s, an extra
/// N(0, (c sigma2)^2) term.
struct MultiLevelPrior {
  double s = 0.1;
  int c = 2;
  double sigma0 = 1.0;
  double sigma2 = 1.0;

  void validate() const;
  double second_moment() const noexcept;
};

struct SignalInstance {
  std::vector<double> x;
  /// Per-coefficient state. Two-state model: 0/1. Multilevel: highest active level.
  std::vector<int> q;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return x.size(); }
};

SignalInstance sample_signal(const MixturePrior& prior, std::size_t n, std::uint64_t seed);

/// For c == 2 this consumes the random stream exactly like sample_signal, so the
/// same seed yields the same signal up to rounding of sqrt(sigma0^2 + sigma2^2).
SignalInstance sample_multilevel_signal(const MultiLevelPrior& prior, std::size_t n,
                                        std::uint64_t seed);

/// Amplitude step preserving the two-state model's expected energy:
/// sqrt((sigma1^2 - sigma0^2) / sum_{k=1}^{c-1} k^2).
double derive_sigma2(const MixturePrior& prior, int c);

/// Multilevel prior with the same s and sigma0 and energy-preserving sigma2.
MultiLevelPrior multilevel_from(const MixturePrior& prior, int c);

/// y + z with z iid N(0, sigma_z2). sigma_z2 == 0 returns y unchanged.
std::vector<double> add_noise(std::span<const double> y, double sigma_z2, std::uint64_t seed);

}  // namespace csbp
