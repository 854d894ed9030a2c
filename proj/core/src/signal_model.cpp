#include "csbp/signal_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "csbp/error.hpp"
#include "csbp/rng.hpp"

namespace csbp {

void MixturePrior::validate() const {
  if (!(s > 0.0 && s < 1.0)) {
    throw ParameterError("sparsity rate s must lie in (0, 1), got " + std::to_string(s));
  }
  if (!(sigma0 > 0.0 && sigma0 < sigma1) || !std::isfinite(sigma1)) {
    throw ParameterError("need 0 < sigma0 < sigma1, got sigma0=" + std::to_string(sigma0) +
                         " sigma1=" + std::to_string(sigma1));
  }
}

void MultiLevelPrior::validate() const {
  if (c < 2) throw ParameterError("component count c must be >= 2");
  if (!(s > 0.0) || !((c - 1) * s < 1.0)) {
    throw ParameterError("need s > 0 and (c - 1) s < 1, got s=" + std::to_string(s) +
                         " c=" + std::to_string(c));
  }
  if (!(sigma0 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ParameterError("sigma0 and sigma2 must be positive");
  }
}

double MultiLevelPrior::second_moment() const noexcept {
  double extra = 0.0;
  for (int k = 1; k < c; ++k) extra += s * (k * sigma2) * (k * sigma2);
  return sigma0 * sigma0 + extra;
}

SignalInstance sample_signal(const MixturePrior& prior, std::size_t n, std::uint64_t seed) {
  prior.validate();
  if (n == 0) throw ParameterError("signal length must be >= 1");

  SplitMix64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SignalInstance out;
  out.seed = seed;
  out.x.resize(n);
  out.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool large = uniform01(rng) < prior.s;
    const double z = normal(rng);
    out.q[i] = large ? 1 : 0;
    out.x[i] = (large ? prior.sigma1 : prior.sigma0) * z;
  }
  return out;
}

SignalInstance sample_multilevel_signal(const MultiLevelPrior& prior, std::size_t n,
                                        std::uint64_t seed) {
  prior.validate();
  if (n == 0) throw ParameterError("signal length must be >= 1");

  SplitMix64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SignalInstance out;
  out.seed = seed;
  out.x.resize(n);
  out.q.resize(n);
  const double v0 = prior.sigma0 * prior.sigma0;
  for (std::size_t i = 0; i < n; ++i) {
    // A sum of independent zero-mean Gaussians is one Gaussian with the summed
    // variance, so a single normal draw per coefficient suffices.
    double var = v0;
    int top = 0;
    for (int level = 1; level < prior.c; ++level) {
      if (uniform01(rng) < prior.s) {
        const double amp = level * prior.sigma2;
        var += amp * amp;
        top = level;
      }
    }
    const double z = normal(rng);
    out.q[i] = top;
    out.x[i] = std::sqrt(var) * z;
  }
  return out;
}

double derive_sigma2(const MixturePrior& prior, int c) {
  if (c < 2) throw ParameterError("component count c must be >= 2");
  if (!(prior.sigma0 > 0.0) || prior.sigma1 < prior.sigma0) {
    throw ParameterError("need 0 < sigma0 <= sigma1");
  }
  double denom = 0.0;
  for (int k = 1; k < c; ++k) denom += static_cast<double>(k) * k;
  const double excess = prior.sigma1 * prior.sigma1 - prior.sigma0 * prior.sigma0;
  return std::sqrt(excess / denom);
}

MultiLevelPrior multilevel_from(const MixturePrior& prior, int c) {
  MultiLevelPrior ml;
  ml.s = prior.s;
  ml.c = c;
  ml.sigma0 = prior.sigma0;
  ml.sigma2 = derive_sigma2(prior, c);
  ml.validate();
  return ml;
}

std::vector<double> add_noise(std::span<const double> y, double sigma_z2, std::uint64_t seed) {
  if (!(sigma_z2 >= 0.0) || !std::isfinite(sigma_z2)) {
    throw ParameterError("noise variance must be >= 0");
  }
  std::vector<double> out(y.begin(), y.end());
  if (sigma_z2 == 0.0) return out;
  SplitMix64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma_z2));
  for (double& v : out) v += normal(rng);
  return out;
}

}  // namespace csbp
