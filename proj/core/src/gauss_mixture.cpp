#include "csbp/gauss_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "csbp/error.hpp"

namespace csbp {

GaussMixture::GaussMixture(std::vector<Gaussian> comps) : comps_(std::move(comps)) {
  if (comps_.empty()) throw ParameterError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& g : comps_) {
    if (!(g.weight > 0.0) || !std::isfinite(g.weight)) throw ParameterError("mixture weights must be positive");
    if (!(g.var > 0.0) || !std::isfinite(g.var)) throw ParameterError("mixture variances must be positive");
    if (!std::isfinite(g.mean)) throw ParameterError("mixture means must be finite");
    total += g.weight;
  }
  for (auto& g : comps_) g.weight /= total;
}

double normal_density(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double GaussMixture::density(double x) const {
  double acc = 0.0;
  for (const auto& g : comps_) acc += g.weight * normal_density(x, g.mean, g.var);
  return acc;
}

double GaussMixture::mean() const {
  double acc = 0.0;
  for (const auto& g : comps_) acc += g.weight * g.mean;
  return acc;
}

double GaussMixture::second_moment() const {
  double acc = 0.0;
  for (const auto& g : comps_) acc += g.weight * (g.var + g.mean * g.mean);
  return acc;
}

double GaussMixture::variance() const {
  const double mu = mean();
  double acc = 0.0;
  for (const auto& g : comps_) {
    const double d = g.mean - mu;
    acc += g.weight * (g.var + d * d);
  }
  return acc;
}

double hellinger(const Gaussian& a, const Gaussian& b) {
  const double sum = a.var + b.var;
  const double d = a.mean - b.mean;
  const double bc = std::sqrt(2.0 * std::sqrt(a.var * b.var) / sum) * std::exp(-0.25 * d * d / sum);
  return std::sqrt(std::max(0.0, 1.0 - bc));
}

Gaussian merge_moments(const Gaussian& a, const Gaussian& b) {
  const double w = a.weight + b.weight;
  const double mu = (a.weight * a.mean + b.weight * b.mean) / w;
  // Central form of E[X^2] - mu^2; avoids cancellation for distant means.
  const double da = a.mean - mu;
  const double db = b.mean - mu;
  const double var = (a.weight * (a.var + da * da) + b.weight * (b.var + db * db)) / w;
  return Gaussian{w, mu, var};
}

GaussMixture mix_multiply(const GaussMixture& a, const GaussMixture& b) {
  std::vector<Gaussian> out;
  out.reserve(a.size() * b.size());
  // Weights carry N(mu1; mu2, v1 + v2); work in logs and rescale by the max.
  std::vector<double> logw;
  logw.reserve(a.size() * b.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g1 : a.components()) {
    for (const auto& g2 : b.components()) {
      const double v = 1.0 / (1.0 / g1.var + 1.0 / g2.var);
      const double mu = v * (g1.mean / g1.var + g2.mean / g2.var);
      const double s = g1.var + g2.var;
      const double d = g1.mean - g2.mean;
      const double lw = std::log(g1.weight) + std::log(g2.weight) - 0.5 * d * d / s -
                        0.5 * std::log(2.0 * std::numbers::pi * s);
      logw.push_back(lw);
      best = std::max(best, lw);
      out.push_back(Gaussian{0.0, mu, v});
    }
  }
  if (!(best > -700.0)) throw DegenerateMessageError("mixture product weight underflow");
  for (std::size_t k = 0; k < out.size(); ++k) out[k].weight = std::exp(logw[k] - best);
  // Drop components whose weight underflowed to zero.
  std::erase_if(out, [](const Gaussian& g) { return !(g.weight > 0.0); });
  return GaussMixture(std::move(out));
}

GaussMixture mix_convolve(const GaussMixture& a, const GaussMixture& b) {
  std::vector<Gaussian> out;
  out.reserve(a.size() * b.size());
  for (const auto& g1 : a.components()) {
    for (const auto& g2 : b.components()) {
      out.push_back(Gaussian{g1.weight * g2.weight, g1.mean + g2.mean, g1.var + g2.var});
    }
  }
  // Products of negligible weights can underflow; those terms carry no mass.
  std::erase_if(out, [](const Gaussian& g) { return !(g.weight > 0.0); });
  if (out.empty()) throw DegenerateMessageError("mixture convolution weight underflow");
  return GaussMixture(std::move(out));
}

GaussMixture mix_affine(const GaussMixture& a, int sign, double offset) {
  if (sign != 1 && sign != -1) throw ParameterError("mix_affine sign must be +1 or -1");
  std::vector<Gaussian> out(a.components().begin(), a.components().end());
  for (auto& g : out) g.mean = sign * g.mean + offset;
  return GaussMixture(std::move(out));
}

GaussMixture mix_blend(const GaussMixture& a, const GaussMixture& b, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("blend weight must lie in (0, 1]");
  if (beta == 1.0) return a;
  std::vector<Gaussian> out;
  out.reserve(a.size() + b.size());
  for (auto g : a.components()) {
    g.weight *= beta;
    out.push_back(g);
  }
  for (auto g : b.components()) {
    g.weight *= 1.0 - beta;
    out.push_back(g);
  }
  std::erase_if(out, [](const Gaussian& g) { return !(g.weight > 0.0); });
  return GaussMixture(std::move(out));
}

GaussMixture reduce_ipra(const GaussMixture& a, std::size_t m) {
  if (m < 1) throw ParameterError("reduce_ipra needs m >= 1");
  if (a.size() <= m) return a;

  std::vector<Gaussian> comps(a.components().begin(), a.components().end());
  std::vector<char> alive(comps.size(), 1);
  const std::size_t n = comps.size();
  // Dense distance table; only the merged row is recomputed after each step.
  std::vector<double> dist(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = hellinger(comps[i], comps[j]);
  }

  for (std::size_t count = n; count > m; --count) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (alive[j] && dist[i * n + j] < best) {
          best = dist[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    comps[bi] = merge_moments(comps[bi], comps[bj]);
    alive[bj] = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi) continue;
      const double d = hellinger(comps[bi], comps[k]);
      if (k < bi) {
        dist[k * n + bi] = d;
      } else {
        dist[bi * n + k] = d;
      }
    }
  }

  std::vector<Gaussian> out;
  out.reserve(m);
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) out.push_back(comps[i]);
  }
  return GaussMixture(std::move(out));
}

MixMoments mix_moments(const GaussMixture& a, double delta, double half_width) {
  if (!(delta > 0.0) || !(half_width >= 0.0)) throw ParameterError("mix_moments needs delta > 0");
  MixMoments out;
  out.mean = a.mean();
  out.var = a.variance();
  const auto bins = static_cast<std::size_t>(std::floor(half_width / delta));
  double best = a.density(0.0);
  out.argmax = 0.0;
  for (std::size_t r = 1; r <= bins; ++r) {
    const double x = static_cast<double>(r) * delta;
    const double neg = a.density(-x);
    if (neg > best) {
      best = neg;
      out.argmax = -x;
    }
    const double pos = a.density(x);
    if (pos > best) {
      best = pos;
      out.argmax = x;
    }
  }
  return out;
}

}  // namespace csbp
