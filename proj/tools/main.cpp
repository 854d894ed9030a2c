#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "csbp/config.hpp"
#include "csbp/csldpc.hpp"
#include "csbp/decoder.hpp"
#include "csbp/error.hpp"
#include "csbp/experiment.hpp"
#include "csbp/oracles.hpp"
#include "csbp/rng.hpp"
#include "csbp/signal_model.hpp"
#include "csbp/vector_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.path, "key = value config file");
  cmd->add_option("-s,--set", args.overrides, "override, key=value (repeatable)");
}

csbp::ExperimentConfig load_config(const ConfigArgs& args, const std::string& experiment) {
  csbp::KeyValueConfig kv;
  if (!args.path.empty()) kv = csbp::KeyValueConfig::load(args.path);
  for (const auto& o : args.overrides) kv.apply_override(o);
  return csbp::ExperimentConfig::from(kv, experiment);
}

csbp::SparseSignMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw csbp::InputError("cannot open '" + path + "'");
  return csbp::read_matrix(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw csbp::InputError("cannot write '" + path + "'");
  out << text;
}

std::string rows_to_csv(const std::vector<csbp::TrialRecord>& rows) {
  std::ostringstream ss;
  csbp::write_csv(ss, rows);
  return ss.str();
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string check_line(const char* name, const csbp::BoundCheck& c) {
  return std::string(name) + " violations=" + std::to_string(c.violations) +
         " freq=" + fmt(c.frequency) + " wilson=[" + fmt(c.wilson.lo) + "," + fmt(c.wilson.hi) +
         "] bound=" + fmt(c.bound) + (c.pass ? " PASS" : " FAIL") + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian compressive sensing via belief propagation"};
  app.require_subcommand(1);

  ConfigArgs gm_cfg;
  std::string gm_out;
  auto* gm = app.add_subcommand("generate-matrix", "Write a random CS-LDPC matrix");
  add_config_options(gm, gm_cfg);
  gm->add_option("-o,--out", gm_out, "matrix file (default stdout)");

  ConfigArgs enc_cfg;
  std::string enc_matrix;
  std::string enc_x;
  std::string enc_out;
  std::uint64_t enc_signal_seed = 0;
  std::string enc_x_out;
  std::uint64_t enc_noise_seed = 0;
  auto* enc = app.add_subcommand("encode", "Compute y = Phi x (+ noise)");
  add_config_options(enc, enc_cfg);
  enc->add_option("-m,--matrix", enc_matrix, "matrix file")->required();
  auto* enc_x_opt = enc->add_option("-x,--signal", enc_x, "signal vector file");
  auto* enc_seed_opt = enc->add_option("--signal-seed", enc_signal_seed, "sample the signal from the model");
  enc_x_opt->excludes(enc_seed_opt);
  enc->add_option("--signal-out", enc_x_out, "where to store a sampled signal");
  enc->add_option("--noise-seed", enc_noise_seed, "seed for noise.sigma_z2 noise");
  enc->add_option("-o,--out", enc_out, "measurement vector file (default stdout)");

  ConfigArgs dec_cfg;
  std::string dec_matrix;
  std::string dec_y;
  std::string dec_out;
  std::string dec_map_out;
  std::string dec_q_out;
  auto* dec = app.add_subcommand("decode", "CS-BP decode a measurement vector");
  add_config_options(dec, dec_cfg);
  dec->add_option("-m,--matrix", dec_matrix, "matrix file")->required();
  dec->add_option("-y,--measurements", dec_y, "measurement vector file")->required();
  dec->add_option("-o,--out", dec_out, "MMSE estimate file (default stdout)");
  dec->add_option("--map-out", dec_map_out, "MAP estimate file");
  dec->add_option("--q-out", dec_q_out, "state posterior file");

  ConfigArgs sw_cfg;
  auto* sw = app.add_subcommand("sweep", "Error-versus-parameter sweep, CSV output");
  add_config_options(sw, sw_cfg);
  ConfigArgs mm_cfg;
  auto* mm = app.add_subcommand("mismatch", "Multilevel-signal sweep with the two-state prior");
  add_config_options(mm, mm_cfg);
  ConfigArgs tm_cfg;
  auto* tm = app.add_subcommand("timing", "Run time against N with M = m_ratio N");
  add_config_options(tm, tm_cfg);

  ConfigArgs vb_cfg;
  std::size_t vb_n = 1000;
  double vb_gamma = 0.5;
  std::size_t vb_trials = 10000;
  std::uint64_t vb_seed = 1;
  auto* vb = app.add_subcommand("validate-bounds", "Monte Carlo check of the norm bounds");
  add_config_options(vb, vb_cfg);
  vb->add_option("--n", vb_n, "signal length");
  vb->add_option("--gamma", vb_gamma, "decay exponent");
  vb->add_option("--trials", vb_trials, "Monte Carlo trials (>= 1000)");
  vb->add_option("--seed", vb_seed, "seed");

  ConfigArgs oc_cfg;
  std::size_t oc_n = 12;
  std::size_t oc_m = 6;
  std::size_t oc_l = 3;
  double oc_sz2 = 0.04;
  std::size_t oc_trials = 10;
  std::uint64_t oc_seed = 1;
  auto* oc = app.add_subcommand("oracle-compare", "CS-BP against exact enumeration on small instances");
  add_config_options(oc, oc_cfg);
  oc->add_option("--n", oc_n, "signal length (<= 16)");
  oc->add_option("--m", oc_m, "measurements");
  oc->add_option("--l", oc_l, "row weight");
  oc->add_option("--sigma-z2", oc_sz2, "noise variance");
  oc->add_option("--trials", oc_trials, "instances");
  oc->add_option("--seed", oc_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gm) {
      const auto cfg = load_config(gm_cfg, "generate-matrix");
      csbp::MatrixParams p;
      p.n = cfg.n.front();
      p.m = cfg.m.front();
      p.l = cfg.l.front();
      p.regular_columns = cfg.regular_columns;
      p.seed = cfg.matrix_seed;
      write_text(gm_out, csbp::serialize_matrix(csbp::generate_matrix(p)));
    } else if (*enc) {
      const auto cfg = load_config(enc_cfg, "encode");
      const auto phi = load_matrix(enc_matrix);
      std::vector<double> x;
      if (!enc_x.empty()) {
        x = csbp::load_vector(enc_x);
      } else {
        x = csbp::sample_signal(cfg.prior(), phi.cols(), enc_signal_seed).x;
        if (!enc_x_out.empty()) csbp::save_vector(enc_x_out, x);
      }
      if (x.size() != phi.cols()) throw csbp::ShapeError("signal length does not match N");
      const auto y = csbp::add_noise(csbp::encode(phi, x), cfg.sigma_z2.front(), enc_noise_seed);
      write_text(enc_out, csbp::serialize_vector(y));
    } else if (*dec) {
      const auto cfg = load_config(dec_cfg, "decode");
      const auto phi = load_matrix(dec_matrix);
      const auto y = csbp::load_vector(dec_y);
      const auto res = csbp::decode(phi, y, cfg.prior(), cfg.decoder_for(cfg.sigma_z2.front()));
      write_text(dec_out, csbp::serialize_vector(res.x_mmse));
      if (!dec_map_out.empty()) csbp::save_vector(dec_map_out, res.x_map);
      if (!dec_q_out.empty()) csbp::save_vector(dec_q_out, res.q_posterior);
      std::cerr << "iters=" << res.iters_run << " converged=" << (res.converged ? 1 : 0)
                << " residual_l2=" << csbp::format_double(res.residual_l2)
                << " clipped_warnings=" << res.telemetry.clipped_warnings
                << " degenerate=" << res.telemetry.degenerate_messages
                << " damping_halved_at=" << res.telemetry.damping_halved_at << "\n";
    } else if (*sw) {
      const auto cfg = load_config(sw_cfg, "sweep");
      write_text(cfg.output_path, rows_to_csv(csbp::run_sweep(cfg)));
    } else if (*mm) {
      const auto cfg = load_config(mm_cfg, "mismatch");
      write_text(cfg.output_path, rows_to_csv(csbp::run_mismatch(cfg)));
    } else if (*tm) {
      const auto cfg = load_config(tm_cfg, "timing");
      const auto res = csbp::run_timing(cfg);
      write_text(cfg.output_path, rows_to_csv(res.rows));
      std::cerr << "csbp log-log exponent: " << fmt(res.csbp_exponent, 3) << "\n";
    } else if (*vb) {
      const auto cfg = load_config(vb_cfg, "validate-bounds");
      const auto r = csbp::validate_norm_bounds(cfg.prior(), vb_n, vb_gamma, vb_trials, vb_seed);
      std::string out = "n=" + std::to_string(r.n) + " gamma=" + fmt(r.gamma, 3) +
                        " trials=" + std::to_string(r.trials) + "\n";
      out += check_line("l2_lower", r.l2_lower);
      out += check_line("l2_upper", r.l2_upper);
      out += check_line("count   ", r.count);
      out += check_line("linf    ", r.linf);
      out += "l2 gaps (sd): lower=" + fmt(r.l2_lower_gap_sd, 2) + " upper=" + fmt(r.l2_upper_gap_sd, 2) + "\n";
      if (r.out_of_regime) out += "warning: out of the asymptotic regime (gap < 3 sd)\n";
      std::cout << out;
      return 0;
    } else if (*oc) {
      const auto cfg = load_config(oc_cfg, "oracle-compare");
      const auto prior = cfg.prior();
      std::cout << "trial  bp_l2      exact_l2   ratio\n";
      for (std::size_t t = 0; t < oc_trials; ++t) {
        const std::uint64_t ts = csbp::hash_seed(oc_seed, t);
        const auto sig = csbp::sample_signal(prior, oc_n, csbp::hash_seed(ts, 1));
        csbp::MatrixParams p;
        p.n = oc_n;
        p.m = oc_m;
        p.l = oc_l;
        p.seed = csbp::hash_seed(ts, 2);
        const auto phi = csbp::generate_matrix(p);
        const auto y = csbp::add_noise(csbp::encode(phi, sig.x), oc_sz2, csbp::hash_seed(ts, 3));
        const auto bp = csbp::decode(phi, y, prior, cfg.decoder_for(oc_sz2));
        const auto ex = csbp::exact_mmse(phi, y, prior, oc_sz2);
        double eb = 0.0;
        double ee = 0.0;
        for (std::size_t i = 0; i < oc_n; ++i) {
          eb += (bp.x_mmse[i] - sig.x[i]) * (bp.x_mmse[i] - sig.x[i]);
          ee += (ex.x_mmse[i] - sig.x[i]) * (ex.x_mmse[i] - sig.x[i]);
        }
        eb = std::sqrt(eb);
        ee = std::sqrt(ee);
        std::printf("%5zu  %-9s  %-9s  %s\n", t, fmt(eb).c_str(), fmt(ee).c_str(),
                    ee > 0.0 ? fmt(eb / ee, 3).c_str() : "-");
      }
    }
  } catch (const csbp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
