#include "csbp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "csbp/csldpc.hpp"
#include "csbp/error.hpp"
#include "csbp/oracles.hpp"
#include "csbp/rng.hpp"
#include "csbp/signal_model.hpp"
#include "csbp/vector_io.hpp"

namespace csbp {

const std::vector<std::string>& experiment_config_keys() {
  static const std::vector<std::string> keys{
      "model.n",          "model.s",
      "model.sigma0",     "model.sigma1",
      "model.c_components",
      "matrix.l",         "matrix.m",
      "matrix.regular_columns",
      "matrix.seed",      "matrix.m_ratio",
      "decoder.codec",    "decoder.p",
      "decoder.delta_factor",
      "decoder.half_width",
      "decoder.beta",     "decoder.beta_con",
      "decoder.beta_var", "decoder.max_iters",
      "decoder.tol",      "decoder.m_comps",
      "decoder.divergence_guard",
      "noise.sigma_z2",
      "run.trials",       "run.algorithms",
      "run.base_seed",    "run.threads",
      "run.iht_k",        "run.iht_iters",
      "run.median_m1",
      "output.path",      "output.wall_time",
  };
  return keys;
}

namespace {

template <class T>
std::vector<T> cast_list(const std::vector<std::uint64_t>& v) {
  return std::vector<T>(v.begin(), v.end());
}

const std::set<std::string> kAlgorithms{"csbp", "iht", "median", "exact"};

}  // namespace

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv, const std::string& experiment) {
  const auto& keys = experiment_config_keys();
  kv.require_known(std::set<std::string>(keys.begin(), keys.end()));

  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "mismatch") {
    c.c_components = {2, 3, 5};
    c.algorithms = {"csbp", "iht"};
  }
  if (experiment == "timing") {
    c.n = {500, 1000, 2000, 4000, 8000};
    c.trials = 3;
    c.wall_time = true;
  }

  c.n = cast_list<std::size_t>(kv.get_uint_list("model.n", {c.n.begin(), c.n.end()}));
  c.s = kv.get_double("model.s", c.s);
  c.sigma0 = kv.get_double("model.sigma0", c.sigma0);
  c.sigma1 = kv.get_double("model.sigma1", c.sigma1);
  c.c_components = cast_list<int>(
      kv.get_uint_list("model.c_components", {c.c_components.begin(), c.c_components.end()}));

  c.l = cast_list<std::size_t>(kv.get_uint_list("matrix.l", {c.l.begin(), c.l.end()}));
  c.m = cast_list<std::size_t>(kv.get_uint_list("matrix.m", {c.m.begin(), c.m.end()}));
  c.regular_columns = kv.get_bool("matrix.regular_columns", c.regular_columns);
  c.matrix_seed = kv.get_uint("matrix.seed", c.matrix_seed);
  c.m_ratio = kv.get_double("matrix.m_ratio", c.m_ratio);

  try {
    c.decoder.codec = parse_codec(kv.get_string("decoder.codec", to_string(c.decoder.codec)));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("key 'decoder.codec': ") + e.what());
  }
  c.grid_p = kv.get_uint("decoder.p", c.grid_p);
  c.decoder.grid_delta_factor = kv.get_double("decoder.delta_factor", c.decoder.grid_delta_factor);
  c.decoder.grid_half_width_sigmas = kv.get_double("decoder.half_width", c.decoder.grid_half_width_sigmas);
  const double beta = kv.get_double("decoder.beta", c.decoder.beta_con);
  c.decoder.beta_con = kv.get_double("decoder.beta_con", beta);
  c.decoder.beta_var = kv.get_double("decoder.beta_var", beta);
  c.decoder.max_iters = kv.get_uint("decoder.max_iters", c.decoder.max_iters);
  c.decoder.tol = kv.get_double("decoder.tol", c.decoder.tol);
  c.decoder.m_comps = kv.get_uint("decoder.m_comps", c.decoder.m_comps);
  c.decoder.divergence_guard = kv.get_bool("decoder.divergence_guard", c.decoder.divergence_guard);

  c.sigma_z2 = kv.get_double_list("noise.sigma_z2", c.sigma_z2);

  c.trials = kv.get_uint("run.trials", c.trials);
  c.algorithms = kv.get_string_list("run.algorithms", c.algorithms);
  c.base_seed = kv.get_uint("run.base_seed", c.base_seed);
  c.threads = kv.get_uint("run.threads", c.threads);
  c.iht_k = kv.get_uint("run.iht_k", c.iht_k);
  c.iht_iters = kv.get_uint("run.iht_iters", c.iht_iters);
  c.median_m1 = kv.get_uint("run.median_m1", c.median_m1);

  c.output_path = kv.get_string("output.path", c.output_path);
  c.wall_time = kv.get_bool("output.wall_time", c.wall_time);

  c.validate();
  return c;
}

DecoderConfig ExperimentConfig::decoder_for(double sz2) const {
  DecoderConfig d = decoder;
  d.sigma_z2 = sz2;
  if (grid_p > 0) {
    d.grid = Grid(grid_p, 2.0 * d.grid_half_width_sigmas * sigma1 / static_cast<double>(grid_p - 1));
  }
  return d;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (n.empty() || c_components.empty() || l.empty() || sigma_z2.empty() || algorithms.empty()) {
    fail("sweep lists must be nonempty");
  }
  if (experiment != "timing" && m.empty()) fail("matrix.m must be nonempty");
  if (trials < 1) fail("run.trials must be >= 1");
  try {
    prior().validate();
  } catch (const ParameterError& e) {
    fail(std::string("model: ") + e.what());
  }
  for (int c : c_components) {
    if (c < 2) fail("model.c_components entries must be >= 2");
    if (!((c - 1) * s < 1.0)) fail("model.c_components: (C - 1) s must be < 1 for C = " + std::to_string(c));
  }
  for (double v : sigma_z2) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail("noise.sigma_z2 entries must be >= 0");
  }
  for (const auto& a : algorithms) {
    if (kAlgorithms.count(a) == 0) fail("run.algorithms: unknown algorithm '" + a + "'");
  }
  const bool exact = std::find(algorithms.begin(), algorithms.end(), "exact") != algorithms.end();
  if (grid_p > 0 && grid_p % 2 == 0) fail("decoder.p must be odd");
  if (experiment == "timing" && !(m_ratio > 0.0)) fail("matrix.m_ratio must be positive");

  for (std::size_t nn : n) {
    if (nn < 1) fail("model.n entries must be >= 1");
    if (exact && nn > kExactMaxN) fail("the exact oracle is only allowed for n <= 16");
    std::vector<std::size_t> ms = m;
    if (experiment == "timing") ms = {0};
    for (std::size_t ll : l) {
      if (ll < 1 || ll > nn) fail("matrix.l must lie in [1, n]");
      for (std::size_t mm : ms) {
        if (experiment == "timing") continue;
        if (mm < 1) fail("matrix.m entries must be >= 1");
        if (regular_columns && (ll * mm) % nn != 0) {
          fail("matrix: regular columns need L M divisible by N (L=" + std::to_string(ll) +
               ", M=" + std::to_string(mm) + ", N=" + std::to_string(nn) + ")");
        }
        const std::size_t k = iht_k > 0 ? iht_k : std::max<std::size_t>(1, std::llround(s * nn));
        if (std::find(algorithms.begin(), algorithms.end(), "iht") != algorithms.end() && k > nn) {
          fail("run.iht_k exceeds n");
        }
        if (median_m1 > mm &&
            std::find(algorithms.begin(), algorithms.end(), "median") != algorithms.end()) {
          fail("run.median_m1 exceeds matrix.m");
        }
      }
    }
  }
  try {
    for (double v : sigma_z2) decoder_for(v).validate(prior());
  } catch (const ParameterError& e) {
    fail(std::string("decoder: ") + e.what());
  }
}

std::string csv_header() {
  return "experiment,algorithm,n,m,l,s,sigma0,sigma1,sigma_z2,c_components,codec,trial,seed,"
         "l2_error,linf_error,iters,converged,seconds";
}

std::string csv_row(const TrialRecord& r) {
  std::string out;
  out.reserve(160);
  auto add = [&out](const std::string& v) {
    if (!out.empty()) out += ',';
    out += v;
  };
  add(r.experiment);
  add(r.algorithm);
  add(std::to_string(r.n));
  add(std::to_string(r.m));
  add(std::to_string(r.l));
  add(format_double(r.s));
  add(format_double(r.sigma0));
  add(format_double(r.sigma1));
  add(format_double(r.sigma_z2));
  add(std::to_string(r.c_components));
  add(r.codec);
  add(std::to_string(r.trial));
  add(std::to_string(r.seed));
  add(format_double(r.l2_error));
  add(format_double(r.linf_error));
  add(format_double(r.iters));
  add(format_double(r.converged));
  add(format_double(r.seconds));
  return out;
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) os << csv_row(r) << '\n';
}

std::size_t resolve_threads(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("CSBP_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max<std::size_t>(cfg.threads, 1);
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw ParameterError("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double fit_loglog_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeError("fit needs equally long x and y");
  if (x.size() < 2) return std::nan("");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : std::nan("");
}

namespace {

struct Point {
  std::size_t n = 0;
  int c = 2;
  std::size_t l = 0;
  std::size_t m = 0;
  double sigma_z2 = 0.0;
};

std::size_t timing_rows(const ExperimentConfig& cfg, std::size_t n, std::size_t l) {
  auto m = static_cast<std::size_t>(std::llround(cfg.m_ratio * static_cast<double>(n)));
  m = std::max<std::size_t>(m, 1);
  if (cfg.regular_columns) {
    const std::size_t step = n / std::gcd(l, n);
    m = (m + step - 1) / step * step;
  }
  return m;
}

std::vector<Point> enumerate_points(const ExperimentConfig& cfg) {
  std::vector<Point> pts;
  for (std::size_t n : cfg.n) {
    for (int c : cfg.c_components) {
      for (std::size_t l : cfg.l) {
        const std::vector<std::size_t> ms =
            cfg.experiment == "timing" ? std::vector<std::size_t>{timing_rows(cfg, n, l)} : cfg.m;
        for (std::size_t m : ms) {
          for (double z : cfg.sigma_z2) pts.push_back({n, c, l, m, z});
        }
      }
    }
  }
  return pts;
}

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t instance_hash(const SparseSignMatrix& phi, const std::vector<double>& x,
                            const std::vector<double>& y) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t j = 0; j < phi.rows(); ++j) {
    for (const auto& e : phi.row(j)) h = fnv_mix(h, (std::uint64_t{e.index} << 1) | (e.sign > 0 ? 1U : 0U));
  }
  for (double v : x) h = fnv_mix(h, std::bit_cast<std::uint64_t>(v));
  for (double v : y) h = fnv_mix(h, std::bit_cast<std::uint64_t>(v));
  return h;
}

// Seeds are shared across sweep points (common random numbers): the signal and
// noise depend on (base_seed, n, trial) only, the matrix additionally on (l, m).
std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const Point& pt, std::size_t trial,
                                   bool multilevel) {
  using Clock = std::chrono::steady_clock;
  const std::uint64_t ts = hash_seed(cfg.base_seed, pt.n, trial);
  const MixturePrior prior = cfg.prior();

  SignalInstance sig;
  if (multilevel || pt.c != 2) {
    sig = sample_multilevel_signal(multilevel_from(prior, pt.c), pt.n, hash_seed(ts, 1));
  } else {
    sig = sample_signal(prior, pt.n, hash_seed(ts, 1));
  }
  MatrixParams mp;
  mp.n = pt.n;
  mp.m = pt.m;
  mp.l = pt.l;
  mp.regular_columns = cfg.regular_columns;
  mp.seed = hash_seed(ts, 2, hash_seed(cfg.matrix_seed, pt.l, pt.m));
  const auto phi = generate_matrix(mp);
  const auto y = add_noise(encode(phi, sig.x), pt.sigma_z2, hash_seed(ts, 3));
  const std::uint64_t fingerprint = instance_hash(phi, sig.x, y);

  std::vector<TrialRecord> rows;
  for (const auto& alg : cfg.algorithms) {
    TrialRecord r;
    r.experiment = cfg.experiment;
    r.algorithm = alg;
    r.n = pt.n;
    r.m = pt.m;
    r.l = pt.l;
    r.s = cfg.s;
    r.sigma0 = cfg.sigma0;
    r.sigma1 = cfg.sigma1;
    r.sigma_z2 = pt.sigma_z2;
    r.c_components = pt.c;
    r.codec = alg == "csbp" ? to_string(cfg.decoder.codec) : "none";
    r.trial = static_cast<long long>(trial);
    r.seed = ts;

    const auto start = Clock::now();
    std::vector<double> xh;
    if (alg == "csbp") {
      auto res = decode(phi, y, prior, cfg.decoder_for(pt.sigma_z2));
      xh = std::move(res.x_mmse);
      r.iters = static_cast<double>(res.iters_run);
      r.converged = res.converged ? 1.0 : 0.0;
    } else if (alg == "iht") {
      const std::size_t k =
          cfg.iht_k > 0 ? cfg.iht_k : std::max<std::size_t>(1, std::llround(cfg.s * pt.n));
      IhtOptions opts;
      opts.iters = cfg.iht_iters;
      std::size_t steps = 0;
      xh = iht_decode(phi, y, k, opts, &steps);
      r.iters = static_cast<double>(steps);
    } else if (alg == "median") {
      xh = median_decode(phi, y, cfg.median_m1);
    } else {
      const double floor_var = 1e-6 * cfg.sigma0 * cfg.sigma0;
      xh = exact_mmse(phi, y, prior, std::max(pt.sigma_z2, floor_var)).x_mmse;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    r.seconds = cfg.wall_time ? secs : 0.0;

    double l2 = 0.0;
    double linf = 0.0;
    for (std::size_t i = 0; i < pt.n; ++i) {
      const double d = xh[i] - sig.x[i];
      l2 += d * d;
      linf = std::max(linf, std::abs(d));
    }
    r.l2_error = std::sqrt(l2);
    r.linf_error = linf;
    if (instance_hash(phi, sig.x, y) != fingerprint) {
      throw NumericError("instance changed between algorithms within one trial");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void append_summaries(const ExperimentConfig& cfg, const std::vector<TrialRecord>& trial_rows,
                      std::vector<TrialRecord>& out) {
  for (const auto& alg : cfg.algorithms) {
    std::vector<double> l2;
    std::vector<double> linf;
    std::vector<double> iters;
    std::vector<double> conv;
    std::vector<double> secs;
    const TrialRecord* proto = nullptr;
    for (const auto& r : trial_rows) {
      if (r.algorithm != alg) continue;
      proto = &r;
      l2.push_back(r.l2_error);
      linf.push_back(r.linf_error);
      iters.push_back(r.iters);
      conv.push_back(r.converged);
      secs.push_back(r.seconds);
    }
    if (proto == nullptr) continue;
    auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    TrialRecord med = *proto;
    med.trial = -1;
    med.seed = cfg.base_seed;
    med.l2_error = median_of(l2);
    med.linf_error = median_of(linf);
    med.iters = median_of(iters);
    med.converged = median_of(conv);
    med.seconds = median_of(secs);
    out.push_back(med);
    if (l2.size() >= 2) {
      TrialRecord avg = med;
      avg.trial = -2;
      avg.l2_error = mean(l2);
      avg.linf_error = mean(linf);
      avg.iters = mean(iters);
      avg.converged = mean(conv);
      avg.seconds = mean(secs);
      out.push_back(avg);
    }
  }
}

std::vector<TrialRecord> run_points(const ExperimentConfig& cfg, bool multilevel, std::size_t threads) {
  cfg.validate();
  const auto points = enumerate_points(cfg);
  const std::size_t tasks = points.size() * cfg.trials;
  std::vector<std::vector<TrialRecord>> results(tasks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      try {
        results[t] = run_trial(cfg, points[t / cfg.trials], t % cfg.trials, multilevel);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks);
      }
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<TrialRecord> out;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<TrialRecord> point_rows;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      for (auto& r : results[p * cfg.trials + t]) point_rows.push_back(std::move(r));
    }
    out.insert(out.end(), point_rows.begin(), point_rows.end());
    append_summaries(cfg, point_rows, out);
  }
  return out;
}

}  // namespace

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg) {
  return run_points(cfg, false, resolve_threads(cfg));
}

std::vector<TrialRecord> run_mismatch(const ExperimentConfig& cfg) {
  return run_points(cfg, true, resolve_threads(cfg));
}

TimingResult run_timing(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.wall_time = true;
  TimingResult out;
  // Sequential so that concurrent work does not distort the measured times.
  out.rows = run_points(c, false, 1);
  std::vector<double> ns;
  std::vector<double> secs;
  for (const auto& r : out.rows) {
    if (r.trial == -1 && r.algorithm == "csbp" && r.seconds > 0.0) {
      ns.push_back(static_cast<double>(r.n));
      secs.push_back(r.seconds);
    }
  }
  out.csbp_exponent = fit_loglog_exponent(ns, secs);
  return out;
}

}  // namespace csbp
