#include "csbp/oracles.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "csbp/error.hpp"
#include "csbp/rng.hpp"

namespace csbp {

namespace {

void check_measurements(const SparseSignMatrix& phi, std::span<const double> y) {
  if (y.size() != phi.rows()) throw ShapeError("measurement length does not match M");
  for (double v : y) {
    if (!std::isfinite(v)) throw InputError("measurements must be finite");
  }
}

}  // namespace

ExactPosterior exact_mmse(const SparseSignMatrix& phi, std::span<const double> y,
                          const MixturePrior& prior, double sigma_z2) {
  prior.validate();
  check_measurements(phi, y);
  const std::size_t n = phi.cols();
  const std::size_t m = phi.rows();
  if (n > kExactMaxN) {
    throw SizeError("exact enumeration is capped at N = " + std::to_string(kExactMaxN));
  }
  if (!(sigma_z2 >= 1e-6 * prior.sigma0 * prior.sigma0) || !std::isfinite(sigma_z2)) {
    throw ParameterError("exact_mmse needs sigma_z2 >= 1e-6 sigma0^2");
  }

  const Eigen::MatrixXd a = Eigen::Map<const Eigen::MatrixXd>(phi.to_dense().data(),
                                                              static_cast<Eigen::Index>(n),
                                                              static_cast<Eigen::Index>(m))
                                .transpose();
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(m));
  const double v0 = prior.sigma0 * prior.sigma0;
  const double v1 = prior.sigma1 * prior.sigma1;
  const double ls1 = std::log(prior.s);
  const double ls0 = std::log1p(-prior.s);

  const std::size_t states = std::size_t{1} << n;
  std::vector<double> logw(states);
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(states));
  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  for (std::size_t q = 0; q < states; ++q) {
    double lp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool big = (q >> i) & 1U;
      d[static_cast<Eigen::Index>(i)] = big ? v1 : v0;
      lp += big ? ls1 : ls0;
    }
    Eigen::MatrixXd c = a * d.asDiagonal() * a.transpose();
    c.diagonal().array() += sigma_z2;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) throw NumericError("measurement covariance is not positive definite");
    const Eigen::VectorXd alpha = llt.solve(yv);
    const Eigen::MatrixXd l = llt.matrixL();
    const double logdet = 2.0 * l.diagonal().array().log().sum();
    logw[q] = lp - 0.5 * logdet - 0.5 * yv.dot(alpha);
    xs.col(static_cast<Eigen::Index>(q)) = d.asDiagonal() * (a.transpose() * alpha);
  }

  const double mx = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double lw : logw) z += std::exp(lw - mx);
  const double log_z = mx + std::log(z);

  ExactPosterior out;
  out.x_mmse.assign(n, 0.0);
  out.q_post.assign(n, 0.0);
  for (std::size_t q = 0; q < states; ++q) {
    const double w = std::exp(logw[q] - log_z);
    out.weight_sum += w;
    for (std::size_t i = 0; i < n; ++i) {
      out.x_mmse[i] += w * xs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q));
      if ((q >> i) & 1U) out.q_post[i] += w;
    }
  }
  return out;
}

double spectral_norm(const SparseSignMatrix& phi, std::size_t iters) {
  const std::size_t n = phi.cols();
  if (phi.rows() == 0 || n == 0) return 0.0;
  // Fixed, non-symmetric start so the iteration is deterministic and unlikely
  // to be orthogonal to the top singular vector.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  double lambda = 0.0;
  for (std::size_t t = 0; t < std::max<std::size_t>(iters, 1); ++t) {
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0) return 0.0;
    for (double& x : v) x /= norm;
    const auto w = encode_transpose(phi, encode(phi, v));
    lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    v = w;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

namespace {

void hard_threshold(std::vector<double>& x, std::size_t k, std::vector<std::size_t>& idx) {
  idx.resize(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) {
    const double fa = std::abs(x[a]);
    const double fb = std::abs(x[b]);
    return fa > fb || (fa == fb && a < b);
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
  for (auto it = idx.begin() + static_cast<std::ptrdiff_t>(k); it != idx.end(); ++it) x[*it] = 0.0;
}

}  // namespace

std::vector<double> iht_decode(const SparseSignMatrix& phi, std::span<const double> y,
                               std::size_t k, const IhtOptions& opts, std::size_t* iters_run) {
  check_measurements(phi, y);
  const std::size_t n = phi.cols();
  if (k < 1 || k > n) throw ParameterError("IHT sparsity k must lie in [1, N]");
  std::vector<double> x(n, 0.0);
  if (iters_run) *iters_run = 0;
  const double norm = spectral_norm(phi, opts.power_iters);
  if (norm == 0.0) return x;
  const double kappa = 1.0 / (norm * norm);

  std::vector<std::size_t> idx;
  std::vector<double> r(y.size());
  double prev_res = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  for (std::size_t t = 0; t < opts.iters; ++t) {
    const auto yhat = encode(phi, x);
    double res = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      r[j] = y[j] - yhat[j];
      res += r[j] * r[j];
    }
    res = std::sqrt(res);
    if (std::abs(prev_res - res) <= opts.stall_tol * std::max(res, 1e-300)) break;
    prev_res = res;
    const auto g = encode_transpose(phi, r);
    for (std::size_t i = 0; i < n; ++i) x[i] += kappa * g[i];
    if (k < n) hard_threshold(x, k, idx);
    ++steps;
  }
  if (iters_run) *iters_run = steps;
  return x;
}

std::size_t default_median_group_rows(std::size_t m, std::size_t n) {
  const double groups = std::ceil(4.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))));
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::floor(static_cast<double>(m) / groups)));
}

std::vector<double> median_decode(const SparseSignMatrix& phi, std::span<const double> y,
                                  std::size_t m1) {
  check_measurements(phi, y);
  const std::size_t m = phi.rows();
  const std::size_t n = phi.cols();
  if (m1 == 0) m1 = default_median_group_rows(m, n);
  if (m1 > m) throw ParameterError("group size m1 exceeds M");
  const std::size_t groups = m / m1;
  // (sqrt(s) Phi)^T (sqrt(s) y) / m1 with s = N / L.
  const double scale = static_cast<double>(n) / static_cast<double>(phi.row_weight()) /
                       static_cast<double>(m1);

  std::vector<double> out(n, 0.0);
  std::vector<double> acc(groups);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& e : phi.col(i)) {
      const std::size_t g = e.index / m1;
      if (g < groups) acc[g] += e.sign * y[e.index];
    }
    const std::size_t mid = groups / 2;
    std::nth_element(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(mid), acc.end());
    double med = acc[mid];
    if (groups % 2 == 0) {
      const double lower = *std::max_element(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(mid));
      med = 0.5 * (med + lower);
    }
    out[i] = scale * med;
  }
  return out;
}

void BoundParams::validate() const {
  if (!(eta > 0.0) || !(gamma > 0.0) || !(mu > 0.0)) {
    throw ParameterError("eta, gamma, and mu must be positive");
  }
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in (0, 1)");
  if (!(sigma0 > 0.0) || !(sigma1 >= sigma0)) throw ParameterError("need 0 < sigma0 <= sigma1");
  if (n < 2) throw ParameterError("n must be >= 2");
}

BoundTerms theorem1_params(const BoundParams& bp) {
  bp.validate();
  const double n = static_cast<double>(bp.n);
  const double lg = std::log(bp.s) + (1.0 + bp.gamma) * std::log(n);
  if (!(lg > 0.0)) throw ParameterError("S N^(1+gamma) must exceed 1");
  const double k = bp.s * n;
  const double ratio = bp.sigma0 / bp.sigma1;
  BoundTerms t;
  t.l = bp.eta * lg / bp.s;
  t.bracket = 2.0 * k + (n - k) * ratio * ratio;
  t.m_expr = (1.0 + 2.0 / bp.eta) * (1.0 + bp.gamma) / (bp.mu * bp.mu) * t.bracket * std::log(n);
  t.q_bound = std::sqrt(2.0 * lg / k);
  return t;
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

BoundCheck make_check(std::size_t k, std::size_t trials, double bound) {
  BoundCheck c;
  c.violations = k;
  c.frequency = static_cast<double>(k) / static_cast<double>(trials);
  c.wilson = wilson_interval(k, trials);
  c.bound = bound;
  c.pass = c.wilson.lo <= bound;
  return c;
}

}  // namespace

NormBoundReport validate_norm_bounds(const MixturePrior& prior, std::size_t n, double gamma,
                                     std::size_t trials, std::uint64_t seed) {
  prior.validate();
  if (trials < 1000) throw ParameterError("validate_norm_bounds needs at least 1000 trials");
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  if (n < 2) throw ParameterError("n must be >= 2");

  const double nn = static_cast<double>(n);
  const double v0 = prior.sigma0 * prior.sigma0;
  const double v1 = prior.sigma1 * prior.sigma1;
  const double lower = prior.s * nn * v1;
  const double upper = nn * (2.0 * prior.s * v1 + (1.0 - prior.s) * v0);
  const double count_cap = 1.5 * prior.s * nn;
  const double lg = std::log(prior.s) + (1.0 + gamma) * std::log(nn);
  const double linf_cap = std::sqrt(2.0 * std::max(lg, 0.0)) * prior.sigma1;

  std::size_t k_lower = 0;
  std::size_t k_upper = 0;
  std::size_t k_count = 0;
  std::size_t k_linf = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto sig = sample_signal(prior, n, hash_seed(seed, t));
    double e = 0.0;
    double mx = 0.0;
    std::size_t large = 0;
    for (std::size_t i = 0; i < n; ++i) {
      e += sig.x[i] * sig.x[i];
      mx = std::max(mx, std::abs(sig.x[i]));
      large += static_cast<std::size_t>(sig.q[i]);
    }
    k_lower += e < lower;
    k_upper += e > upper;
    k_count += static_cast<double>(large) > count_cap;
    k_linf += !(mx < linf_cap);
  }

  NormBoundReport r;
  r.n = n;
  r.gamma = gamma;
  r.trials = trials;
  const double bound = std::pow(nn, -gamma);
  r.l2_lower = make_check(k_lower, trials, bound);
  r.l2_upper = make_check(k_upper, trials, bound);
  r.count = make_check(k_count, trials, bound);
  r.linf = make_check(k_linf, trials, 0.5 * bound);

  // Var(X^2) = 3 E[sigma^4] - (E[sigma^2])^2 for the mixture.
  const double ex2 = prior.second_moment();
  const double ex4 = 3.0 * (prior.s * v1 * v1 + (1.0 - prior.s) * v0 * v0);
  const double sd = std::sqrt(nn * (ex4 - ex2 * ex2));
  r.l2_lower_gap_sd = (nn * ex2 - lower) / sd;
  r.l2_upper_gap_sd = (upper - nn * ex2) / sd;
  r.out_of_regime = std::min(r.l2_lower_gap_sd, r.l2_upper_gap_sd) < 3.0;
  return r;
}

DoublingReport median_doubling_search(const MixturePrior& prior, std::size_t n, double gamma,
                                      double eta, double mu, std::size_t trials,
                                      std::size_t max_doublings, std::uint64_t seed) {
  prior.validate();
  if (trials == 0) throw ParameterError("trials must be >= 1");
  BoundParams bp;
  bp.eta = eta;
  bp.gamma = gamma;
  bp.mu = mu;
  bp.s = prior.s;
  bp.sigma0 = prior.sigma0;
  bp.sigma1 = prior.sigma1;
  bp.n = n;
  const auto th = theorem1_params(bp);

  DoublingReport rep;
  rep.l = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(th.l)), 1, n);
  rep.target = 1.0 - 2.0 * std::pow(static_cast<double>(n), -gamma);
  std::size_t m = static_cast<std::size_t>(
      std::ceil(prior.s * static_cast<double>(n) * std::log2(static_cast<double>(n))));
  const double cap = mu * prior.sigma1;

  for (std::size_t level = 0; level <= max_doublings; ++level, m *= 2) {
    std::size_t ok = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t ts = hash_seed(seed, level, t);
      const auto sig = sample_signal(prior, n, hash_seed(ts, 1));
      MatrixParams mp;
      mp.n = n;
      mp.m = m;
      mp.l = rep.l;
      mp.seed = hash_seed(ts, 2);
      const auto phi = generate_matrix(mp);
      const auto y = encode(phi, sig.x);
      const auto xh = median_decode(phi, y);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(xh[i] - sig.x[i]));
      ok += err < cap;
    }
    const double rate = static_cast<double>(ok) / static_cast<double>(trials);
    rep.levels.push_back({m, ok, rate});
    if (rate >= rep.target) {
      rep.doublings = level;
      rep.found = true;
      break;
    }
  }
  return rep;
}

}  // namespace csbp
