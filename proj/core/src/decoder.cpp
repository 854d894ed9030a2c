#include "csbp/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include "csbp/error.hpp"
#include "csbp/factor_graph.hpp"
#include "csbp/fft.hpp"
#include "csbp/gauss_mixture.hpp"

namespace csbp {

std::string to_string(Codec codec) { return codec == Codec::grid ? "grid" : "mog"; }

Codec parse_codec(const std::string& name) {
  if (name == "grid") return Codec::grid;
  if (name == "mog") return Codec::mog;
  throw ParameterError("unknown codec '" + name + "' (expected grid or mog)");
}

Grid DecoderConfig::resolve_grid(const MixturePrior& prior) const {
  if (grid) return *grid;
  return Grid::for_prior(prior, grid_delta_factor, grid_half_width_sigmas);
}

std::size_t DecoderConfig::resolve_max_iters(std::size_t n) const {
  if (max_iters > 0) return max_iters;
  return std::max<std::size_t>(1, static_cast<std::size_t>(
                                      std::ceil(2.0 * std::log2(static_cast<double>(std::max<std::size_t>(n, 2))))));
}

void DecoderConfig::validate(const MixturePrior& prior) const {
  prior.validate();
  if (!(beta_con > 0.0 && beta_con <= 1.0) || !(beta_var > 0.0 && beta_var <= 1.0)) {
    throw ParameterError("damping weights must lie in (0, 1]");
  }
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ParameterError("tol must be finite and >= 0");
  if (!(sigma_z2 >= 0.0) || !std::isfinite(sigma_z2)) {
    throw ParameterError("sigma_z2 must be finite and >= 0");
  }
  if (codec == Codec::mog && m_comps < 1) throw ParameterError("m_comps must be >= 1");
  const Grid g = resolve_grid(prior);
  if (!(g.delta() < prior.sigma0)) {
    throw ParameterError("grid spacing must be smaller than sigma0");
  }
}

namespace {

using Clock = std::chrono::steady_clock;
using cd = std::complex<double>;

constexpr double kRelFloor = 1e-12;

// Plain complex product; skips the C99 Annex G inf/nan recovery of operator*.
inline cd cmul(cd a, cd b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
constexpr double kClipWarn = 0.1;

void check_inputs(const SparseSignMatrix& phi, std::span<const double> y) {
  if (y.size() != phi.rows()) {
    throw ShapeError("measurement length " + std::to_string(y.size()) + " does not match M = " +
                     std::to_string(phi.rows()));
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw InputError("measurements must be finite");
  }
}

double normal_pdf(double x, double var) {
  return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E[(x + Z)^+] for Z ~ N(0, s^2).
double smooth_ramp(double x, double s) {
  return x * phi_cdf(x / s) + s * std::exp(-0.5 * x * x / (s * s)) / std::sqrt(2.0 * std::numbers::pi);
}

// Normalizes to unit mass on spacing delta and applies the relative floor.
// Returns false when the vector has no usable mass.
bool finish_message(std::span<double> v, double delta) {
  double sum = 0.0;
  double mx = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return false;
    sum += x;
    mx = std::max(mx, x);
  }
  if (!(sum > 0.0)) return false;
  const double floor = kRelFloor * mx;
  sum = 0.0;
  for (double& x : v) {
    x = std::max(x, floor);
    sum += x;
  }
  const double inv = 1.0 / (sum * delta);
  for (double& x : v) x *= inv;
  return true;
}

// Damps fresh into old in place; returns the L1 change.
double damp_into(std::span<double> old, std::span<const double> fresh, double beta, double delta) {
  double change = 0.0;
  for (std::size_t k = 0; k < old.size(); ++k) {
    const double next = beta * fresh[k] + (1.0 - beta) * old[k];
    change += std::abs(next - old[k]);
    old[k] = next;
  }
  return change * delta;
}

void finalize(DecodeResult& res, const SparseSignMatrix& phi, std::span<const double> y,
              Clock::time_point start) {
  const auto yhat = encode(phi, res.x_mmse);
  double r2 = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) r2 += (y[j] - yhat[j]) * (y[j] - yhat[j]);
  res.residual_l2 = std::sqrt(r2);
  res.telemetry.seconds = std::chrono::duration<double>(Clock::now() - start).count();
}

// Returns true when the guard fires at this iteration.
bool divergence_guard(const std::vector<double>& change, std::size_t& grow_run) {
  const std::size_t t = change.size();
  if (t >= 2 && change[t - 1] > change[t - 2]) {
    ++grow_run;
  } else {
    grow_run = 0;
  }
  return grow_run >= 3;
}

class GridEngine {
 public:
  GridEngine(const FactorGraph& g, std::span<const double> y, const MixturePrior& prior,
             const DecoderConfig& cfg)
      : g_(g), y_(y), prior_(prior), cfg_(cfg), grid_(cfg.resolve_grid(prior)),
        p_(grid_.size()), c_(grid_.center()), delta_(grid_.delta()) {
    comp0_.resize(p_);
    comp1_.resize(p_);
    prior_v_.resize(p_);
    double s0 = 0.0;
    double s1 = 0.0;
    for (std::size_t k = 0; k < p_; ++k) {
      const double t = grid_.point(k);
      comp0_[k] = normal_pdf(t, prior.sigma0 * prior.sigma0);
      comp1_[k] = normal_pdf(t, prior.sigma1 * prior.sigma1);
      s0 += comp0_[k];
      s1 += comp1_[k];
    }
    for (std::size_t k = 0; k < p_; ++k) {
      comp0_[k] /= s0 * delta_;
      comp1_[k] /= s1 * delta_;
      prior_v_[k] = prior.s * comp1_[k] + (1.0 - prior.s) * comp0_[k];
    }

    const std::size_t e = g.n_edges();
    v2c_.resize(e * p_);
    c2v_.assign(e * p_, 1.0 / (static_cast<double>(p_) * delta_));
    for (std::size_t i = 0; i < e; ++i) std::copy(prior_v_.begin(), prior_v_.end(), v2c_.begin() + i * p_);

    // Kernel: hat interpolation smoothed by the noise (or a quantization
    // regularizer when noiseless), in bin units.
    const double noise_var = cfg.sigma_z2 > 0.0 ? cfg.sigma_z2 : 0.25 * delta_ * delta_;
    ksig_ = std::sqrt(noise_var) / delta_;
    khalf_ = static_cast<std::ptrdiff_t>(std::ceil(1.0 + 10.0 * ksig_)) + 1;

    std::size_t dmax = 0;
    for (std::size_t j = 0; j < g.n_con(); ++j) dmax = std::max(dmax, g.con_degree(j));
    double amax = 0.0;
    for (double v : y) amax = std::max(amax, std::abs(v) / delta_);
    const double sum_sd = std::sqrt(static_cast<double>(dmax > 0 ? dmax - 1 : 0) * prior.second_moment()) / delta_;
    const double reach = std::min(8.0 * sum_sd + static_cast<double>(c_),
                                  static_cast<double>((dmax > 0 ? dmax - 1 : 0) * c_));
    const auto need = static_cast<std::size_t>(std::ceil(amax + reach)) + c_ +
                      static_cast<std::size_t>(khalf_) + 2;
    fft_size_ = next_fast_fft_size(std::max(2 * p_ - 1, need));
    fft_ = std::make_unique<RealFft>(fft_size_);
  }

  DecodeResult run() {
    const auto start = Clock::now();
    DecodeResult res;
    const std::size_t n = g_.n_var();
    const std::size_t iters = cfg_.resolve_max_iters(n);
    double beta_c = cfg_.beta_con;
    double beta_v = cfg_.beta_var;
    std::size_t grow_run = 0;

    if (g_.n_edges() > 0) {
      for (std::size_t it = 1; it <= iters; ++it) {
        const double ch_c = update_constraints(it == 1 ? 1.0 : beta_c, res.telemetry);
        const double ch_v = update_variables(beta_v, res.telemetry);
        const double change = std::max(ch_c, ch_v);
        res.telemetry.max_change.push_back(change);
        res.iters_run = it;
        if (change <= cfg_.tol) {
          res.converged = true;
          break;
        }
        if (cfg_.divergence_guard && res.telemetry.damping_halved_at == 0 &&
            divergence_guard(res.telemetry.max_change, grow_run)) {
          beta_c *= 0.5;
          beta_v *= 0.5;
          res.telemetry.damping_halved_at = it;
        }
      }
    }

    estimates(res);
    finalize(res, g_.to_matrix(), y_, start);
    return res;
  }

 private:
  double update_constraints(double beta, DecodeTelemetry& tel) {
    const std::size_t P = fft_size_;
    const std::size_t H = fft_->spectrum_size();
    std::vector<double> buf(P);
    std::vector<cd> spec;
    std::vector<cd> prefix;
    std::vector<cd> kern(H);
    std::vector<cd> work(H);
    std::vector<cd> suffix(H);
    std::vector<double> msg(p_);
    double max_change = 0.0;

    for (std::size_t j = 0; j < g_.n_con(); ++j) {
      const std::size_t b = g_.con_begin(j);
      const std::size_t d = g_.con_degree(j);
      spec.resize(d * H);
      prefix.resize((d + 1) * H);

      for (std::size_t k = 0; k < d; ++k) {
        std::fill(buf.begin(), buf.end(), 0.0);
        const double* src = &v2c_[(b + k) * p_];
        for (std::size_t t = 0; t < p_; ++t) {
          const std::size_t pos = t >= c_ ? t - c_ : P - (c_ - t);
          buf[pos] = src[t] * delta_;
        }
        cd* out = &spec[k * H];
        fft_->forward(buf.data(), out);
        if (g_.edge(b + k).sign < 0) {
          for (std::size_t h = 0; h < H; ++h) out[h] = std::conj(out[h]);
        }
      }

      const double scaled = y_[j] / delta_;
      const double a_floor = std::floor(scaled);
      const double r = scaled - a_floor;
      const auto a = static_cast<std::ptrdiff_t>(a_floor);
      std::fill(buf.begin(), buf.end(), 0.0);
      double ksum = 0.0;
      for (std::ptrdiff_t k = -khalf_; k <= khalf_; ++k) {
        const double x = static_cast<double>(k) + r;
        const double v = std::max(0.0, smooth_ramp(x + 1.0, ksig_) - 2.0 * smooth_ramp(x, ksig_) +
                                           smooth_ramp(x - 1.0, ksig_));
        buf[wrap(k)] += v;
        ksum += v;
      }
      fft_->forward(buf.data(), kern.data());

      std::fill(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(H), cd(1.0, 0.0));
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t h = 0; h < H; ++h) prefix[(k + 1) * H + h] = cmul(prefix[k * H + h], spec[k * H + h]);
      }
      std::fill(suffix.begin(), suffix.end(), cd(1.0, 0.0));
      for (std::size_t kk = d; kk-- > 0;) {
        for (std::size_t h = 0; h < H; ++h) work[h] = cmul(cmul(prefix[kk * H + h], suffix[h]), kern[h]);
        const double total_mass = work[0].real();
        fft_->inverse(work.data(), buf.data());

        const GraphEdge& e = g_.edge(b + kk);
        double window = 0.0;
        for (std::size_t t = 0; t < p_; ++t) {
          const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(c_);
          const double v = std::max(0.0, buf[wrap(a - e.sign * off)]);
          msg[t] = v;
          window += v;
        }
        window /= static_cast<double>(P);
        if (total_mass > 0.0 && 1.0 - window / total_mass > kClipWarn) ++tel.clipped_warnings;
        if (!finish_message(msg, delta_)) {
          ++tel.degenerate_messages;
          std::fill(msg.begin(), msg.end(), 1.0 / (static_cast<double>(p_) * delta_));
        }
        std::span<double> old(&c2v_[(b + kk) * p_], p_);
        max_change = std::max(max_change, damp_into(old, msg, beta, delta_));

        for (std::size_t h = 0; h < H; ++h) suffix[h] = cmul(suffix[h], spec[kk * H + h]);
      }
    }
    return max_change;
  }

  double update_variables(double beta, DecodeTelemetry& tel) {
    std::vector<double> prod(p_);
    std::vector<double> msg(p_);
    double max_change = 0.0;
    for (std::size_t i = 0; i < g_.n_var(); ++i) {
      const auto edges = g_.var_edges(i);
      if (edges.empty()) continue;
      const bool ok = full_product(i, prod, true);
      for (std::uint32_t e : edges) {
        bool good = ok;
        if (good) {
          const double* in = &c2v_[e * p_];
          for (std::size_t t = 0; t < p_; ++t) msg[t] = prod[t] / in[t];
          good = finish_message(msg, delta_);
        }
        if (!good) {
          ++tel.degenerate_messages;
          std::copy(prior_v_.begin(), prior_v_.end(), msg.begin());
        }
        std::span<double> old(&v2c_[e * p_], p_);
        max_change = std::max(max_change, damp_into(old, msg, beta, delta_));
      }
    }
    return max_change;
  }

  // Product of (optionally) the prior and every incoming message of variable
  // i, rescaled to max 1 after each factor.
  bool full_product(std::size_t i, std::span<double> prod, bool with_prior) const {
    if (with_prior) {
      std::copy(prior_v_.begin(), prior_v_.end(), prod.begin());
    } else {
      std::fill(prod.begin(), prod.end(), 1.0);
    }
    for (std::uint32_t e : g_.var_edges(i)) {
      const double* in = &c2v_[e * p_];
      double mx = 0.0;
      for (std::size_t t = 0; t < p_; ++t) {
        prod[t] *= in[t];
        mx = std::max(mx, prod[t]);
      }
      if (!(mx > 0.0) || !std::isfinite(mx)) return false;
      const double inv = 1.0 / mx;
      for (double& v : prod) v *= inv;
    }
    return true;
  }

  void estimates(DecodeResult& res) const {
    const std::size_t n = g_.n_var();
    res.x_mmse.assign(n, 0.0);
    res.x_map.assign(n, 0.0);
    res.q_posterior.assign(n, prior_.s);
    std::vector<double> lik(p_);
    std::vector<double> post(p_);
    for (std::size_t i = 0; i < n; ++i) {
      if (g_.var_edges(i).empty()) continue;
      if (!full_product(i, lik, false)) {
        std::fill(lik.begin(), lik.end(), 1.0);
      }
      double a0 = 0.0;
      double a1 = 0.0;
      for (std::size_t t = 0; t < p_; ++t) {
        a0 += comp0_[t] * lik[t];
        a1 += comp1_[t] * lik[t];
        post[t] = prior_v_[t] * lik[t];
      }
      const double num = prior_.s * a1;
      const double den = num + (1.0 - prior_.s) * a0;
      res.q_posterior[i] = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : prior_.s;
      try {
        const auto m = GridPdf(grid_, post).moments();
        res.x_mmse[i] = m.mean;
        res.x_map[i] = m.argmax;
      } catch (const DegenerateMessageError&) {
        res.q_posterior[i] = prior_.s;
      }
    }
  }

  std::size_t wrap(std::ptrdiff_t k) const {
    const auto P = static_cast<std::ptrdiff_t>(fft_size_);
    std::ptrdiff_t m = k % P;
    if (m < 0) m += P;
    return static_cast<std::size_t>(m);
  }

  const FactorGraph& g_;
  std::span<const double> y_;
  MixturePrior prior_;
  const DecoderConfig& cfg_;
  Grid grid_;
  std::size_t p_;
  std::size_t c_;
  double delta_;
  std::vector<double> comp0_;
  std::vector<double> comp1_;
  std::vector<double> prior_v_;
  std::vector<double> v2c_;
  std::vector<double> c2v_;
  double ksig_ = 0.0;
  std::ptrdiff_t khalf_ = 0;
  std::size_t fft_size_ = 0;
  std::unique_ptr<RealFft> fft_;
};

class MogEngine {
 public:
  MogEngine(const FactorGraph& g, std::span<const double> y, const MixturePrior& prior,
            const DecoderConfig& cfg)
      : g_(g), y_(y), prior_(prior), cfg_(cfg), grid_(cfg.resolve_grid(prior)),
        prior_mix_({Gaussian{prior.s, 0.0, prior.sigma1 * prior.sigma1},
                    Gaussian{1.0 - prior.s, 0.0, prior.sigma0 * prior.sigma0}}) {
    // Only the L = 1 noiseless case needs a width; it gets the grid regularizer.
    noise_var_ = cfg.sigma_z2 > 0.0 ? cfg.sigma_z2 : 0.0;
    tiny_var_ = 0.25 * grid_.delta() * grid_.delta();
    const double wide = 1e6 * prior.sigma1 * prior.sigma1;
    v2c_.assign(g.n_edges(), prior_mix_);
    c2v_.assign(g.n_edges(), GaussMixture::single(0.0, wide));
    c2v_fresh_.assign(g.n_edges(), true);
    for (std::size_t k = 0; k < grid_.size(); ++k) pts_.push_back(grid_.point(k));
  }

  DecodeResult run() {
    const auto start = Clock::now();
    DecodeResult res;
    const std::size_t iters = cfg_.resolve_max_iters(g_.n_var());
    double beta_c = cfg_.beta_con;
    double beta_v = cfg_.beta_var;
    std::size_t grow_run = 0;

    if (g_.n_edges() > 0) {
      for (std::size_t it = 1; it <= iters; ++it) {
        const double ch_c = update_constraints(beta_c, res.telemetry);
        const double ch_v = update_variables(beta_v, res.telemetry);
        const double change = std::max(ch_c, ch_v);
        res.telemetry.max_change.push_back(change);
        res.iters_run = it;
        if (change <= cfg_.tol) {
          res.converged = true;
          break;
        }
        if (cfg_.divergence_guard && res.telemetry.damping_halved_at == 0 &&
            divergence_guard(res.telemetry.max_change, grow_run)) {
          beta_c *= 0.5;
          beta_v *= 0.5;
          res.telemetry.damping_halved_at = it;
        }
      }
    }

    estimates(res);
    finalize(res, g_.to_matrix(), y_, start);
    return res;
  }

 private:
  GaussMixture reduce(const GaussMixture& a) const { return reduce_ipra(a, cfg_.m_comps); }

  double l1(const GaussMixture& a, const GaussMixture& b) const {
    double s = 0.0;
    for (double t : pts_) s += std::abs(a.density(t) - b.density(t));
    return s * grid_.delta();
  }

  double update_constraints(double beta, DecodeTelemetry& tel) {
    double max_change = 0.0;
    std::vector<GaussMixture> in;
    std::vector<GaussMixture> prefix;
    for (std::size_t j = 0; j < g_.n_con(); ++j) {
      const std::size_t b = g_.con_begin(j);
      const std::size_t d = g_.con_degree(j);
      in.clear();
      for (std::size_t k = 0; k < d; ++k) in.push_back(mix_affine(v2c_[b + k], g_.edge(b + k).sign, 0.0));

      const double base_var = noise_var_ > 0.0 ? noise_var_ : (d == 1 ? tiny_var_ : 0.0);
      prefix.assign(1, GaussMixture::single(0.0, 1.0));
      // prefix[k] = sum of in[0..k-1]; prefix[0] is the empty sum, tracked by `have`.
      std::vector<bool> have(d + 1, false);
      for (std::size_t k = 0; k < d; ++k) {
        prefix.push_back(have[k] ? reduce(mix_convolve(prefix[k], in[k])) : in[k]);
        have[k + 1] = true;
      }
      GaussMixture suffix;
      bool have_suffix = false;
      for (std::size_t kk = d; kk-- > 0;) {
        GaussMixture loo;
        bool have_loo = false;
        if (have[kk] && have_suffix) {
          loo = reduce(mix_convolve(prefix[kk], suffix));
          have_loo = true;
        } else if (have[kk]) {
          loo = prefix[kk];
          have_loo = true;
        } else if (have_suffix) {
          loo = suffix;
          have_loo = true;
        }
        if (base_var > 0.0) {
          const auto noise = GaussMixture::single(0.0, base_var);
          loo = have_loo ? mix_convolve(loo, noise) : noise;
        }
        const int s = g_.edge(b + kk).sign;
        GaussMixture fresh = mix_affine(loo, -s, s * y_[j]);

        GaussMixture& old = c2v_[b + kk];
        GaussMixture next =
            c2v_fresh_[b + kk] ? fresh : reduce(mix_blend(fresh, old, beta));
        const double ch = c2v_fresh_[b + kk] ? 2.0 : l1(next, old);
        max_change = std::max(max_change, ch);
        old = std::move(next);
        c2v_fresh_[b + kk] = false;

        suffix = have_suffix ? reduce(mix_convolve(in[kk], suffix)) : in[kk];
        have_suffix = true;
      }
    }
    (void)tel;
    return max_change;
  }

  double update_variables(double beta, DecodeTelemetry& tel) {
    double max_change = 0.0;
    std::vector<GaussMixture> prefix;
    for (std::size_t i = 0; i < g_.n_var(); ++i) {
      const auto edges = g_.var_edges(i);
      const std::size_t d = edges.size();
      if (d == 0) continue;
      bool ok = true;
      prefix.assign(1, prior_mix_);
      try {
        for (std::size_t k = 0; k + 1 < d; ++k) {
          prefix.push_back(reduce(mix_multiply(prefix[k], c2v_[edges[k]])));
        }
      } catch (const DegenerateMessageError&) {
        ok = false;
      }
      GaussMixture suffix;
      bool have_suffix = false;
      for (std::size_t kk = d; kk-- > 0;) {
        GaussMixture fresh = prior_mix_;
        if (ok) {
          try {
            fresh = have_suffix ? reduce(mix_multiply(prefix[kk], suffix)) : prefix[kk];
            if (kk > 0) {
              suffix = have_suffix ? reduce(mix_multiply(c2v_[edges[kk]], suffix)) : c2v_[edges[kk]];
              have_suffix = true;
            }
          } catch (const DegenerateMessageError&) {
            ++tel.degenerate_messages;
            fresh = prior_mix_;
          }
        } else {
          ++tel.degenerate_messages;
        }
        GaussMixture& old = v2c_[edges[kk]];
        GaussMixture next = reduce(mix_blend(fresh, old, beta));
        max_change = std::max(max_change, l1(next, old));
        old = std::move(next);
      }
    }
    return max_change;
  }

  void estimates(DecodeResult& res) const {
    const std::size_t n = g_.n_var();
    res.x_mmse.assign(n, 0.0);
    res.x_map.assign(n, 0.0);
    res.q_posterior.assign(n, prior_.s);
    const double v0 = prior_.sigma0 * prior_.sigma0;
    const double v1 = prior_.sigma1 * prior_.sigma1;
    const double arg_delta = 0.25 * prior_.sigma0;
    const double arg_half = 6.0 * prior_.sigma1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto edges = g_.var_edges(i);
      if (edges.empty()) continue;
      try {
        GaussMixture lik = c2v_[edges[0]];
        for (std::size_t k = 1; k < edges.size(); ++k) lik = reduce(mix_multiply(lik, c2v_[edges[k]]));
        double a0 = 0.0;
        double a1 = 0.0;
        for (const auto& c : lik.components()) {
          a0 += c.weight * normal_density(c.mean, 0.0, v0 + c.var);
          a1 += c.weight * normal_density(c.mean, 0.0, v1 + c.var);
        }
        const double num = prior_.s * a1;
        const double den = num + (1.0 - prior_.s) * a0;
        res.q_posterior[i] = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : prior_.s;
        const auto post = mix_multiply(prior_mix_, lik);
        const auto m = mix_moments(post, arg_delta, arg_half);
        res.x_mmse[i] = m.mean;
        res.x_map[i] = m.argmax;
      } catch (const DegenerateMessageError&) {
        res.q_posterior[i] = prior_.s;
      }
    }
  }

  const FactorGraph& g_;
  std::span<const double> y_;
  MixturePrior prior_;
  const DecoderConfig& cfg_;
  Grid grid_;
  GaussMixture prior_mix_;
  double noise_var_ = 0.0;
  double tiny_var_ = 0.0;
  std::vector<GaussMixture> v2c_;
  std::vector<GaussMixture> c2v_;
  std::vector<bool> c2v_fresh_;
  std::vector<double> pts_;
};

}  // namespace

DecodeResult decode(const SparseSignMatrix& phi, std::span<const double> y,
                    const MixturePrior& prior, const DecoderConfig& cfg) {
  cfg.validate(prior);
  check_inputs(phi, y);
  const FactorGraph graph(phi);
  if (cfg.codec == Codec::grid) return GridEngine(graph, y, prior, cfg).run();
  return MogEngine(graph, y, prior, cfg).run();
}

std::vector<DecodeResult> progressive_decode(const SparseSignMatrix& phi,
                                             std::span<const double> y,
                                             std::span<const std::size_t> prefix_lengths,
                                             const MixturePrior& prior,
                                             const DecoderConfig& cfg) {
  check_inputs(phi, y);
  for (std::size_t k = 0; k < prefix_lengths.size(); ++k) {
    if (prefix_lengths[k] > phi.rows()) {
      throw ParameterError("prefix length " + std::to_string(prefix_lengths[k]) +
                           " exceeds M = " + std::to_string(phi.rows()));
    }
    if (k > 0 && prefix_lengths[k] < prefix_lengths[k - 1]) {
      throw ParameterError("prefix lengths must be ascending");
    }
  }
  std::vector<DecodeResult> out;
  out.reserve(prefix_lengths.size());
  for (std::size_t m : prefix_lengths) {
    out.push_back(decode(phi.prefix_rows(m), y.first(m), prior, cfg));
  }
  return out;
}

}  // namespace csbp
