#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "csbp/csldpc.hpp"
#include "csbp/decoder.hpp"
#include "csbp/error.hpp"
#include "csbp/oracles.hpp"
#include "reference.hpp"

using namespace csbp;

namespace {

const MixturePrior kPrior{0.1, 1.0, 10.0};

SparseSignMatrix random_matrix(std::size_t n, std::size_t m, std::size_t l, std::uint64_t seed) {
  MatrixParams p;
  p.n = n;
  p.m = m;
  p.l = l;
  p.seed = seed;
  return generate_matrix(p);
}

}  // namespace

TEST(Decoder, EmptyMatrixReturnsPrior) {
  const SparseSignMatrix phi(7, 3, {});
  for (Codec codec : {Codec::grid, Codec::mog}) {
    DecoderConfig cfg;
    cfg.codec = codec;
    const auto r = decode(phi, std::vector<double>{}, kPrior, cfg);
    for (std::size_t i = 0; i < 7; ++i) {
      EXPECT_EQ(r.x_mmse[i], 0.0);
      EXPECT_EQ(r.q_posterior[i], kPrior.s);
    }
  }
}

TEST(Decoder, SingleEdgeMatchesScalarPosterior) {
  // N = M = L = 1: one iteration gives prior times the shifted likelihood.
  const MixturePrior prior{0.2, 0.5, 2.0};
  const double sz2 = 0.25;
  const SparseSignMatrix phi(1, 1, {{{0, -1}}});
  DecoderConfig cfg;
  cfg.sigma_z2 = sz2;
  cfg.grid = Grid(48001, 0.0005);
  for (double y : {-3.1, 0.2, 1.7}) {
    const auto r = decode(phi, std::vector<double>{y}, prior, cfg);
    const double x_obs = -y;
    double num = 0.0, den = 0.0, q = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double v = k ? prior.sigma1 * prior.sigma1 : prior.sigma0 * prior.sigma0;
      const double w = (k ? prior.s : 1 - prior.s) * testref::gauss(x_obs, 0, v + sz2);
      num += w * v / (v + sz2) * x_obs;
      den += w;
      if (k) q = w;
    }
    EXPECT_NEAR(r.x_mmse[0], num / den, 1e-6);
    EXPECT_NEAR(r.q_posterior[0], q / den, 1e-6);
    EXPECT_NEAR(r.residual_l2, std::abs(y + r.x_mmse[0]), 1e-12);
  }
}

TEST(Decoder, ForestMatchesExactPosterior) {
  // BP is exact on a forest; grid spacing sigma0 / 4.
  DecoderConfig cfg;
  cfg.sigma_z2 = 0.01;
  cfg.grid = Grid(525, 0.25);
  cfg.beta_con = cfg.beta_var = 1.0;
  cfg.max_iters = 40;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto phi = testref::forest_matrix(15, 7, 3, seed);
    const auto sig = sample_signal(kPrior, 15, seed + 100);
    const auto y = add_noise(encode(phi, sig.x), 0.01, seed + 200);
    const auto bp = decode(phi, y, kPrior, cfg);
    const auto ex = exact_mmse(phi, y, kPrior, 0.01);
    EXPECT_TRUE(bp.converged);
    for (std::size_t i = 0; i < 15; ++i) {
      EXPECT_NEAR(bp.x_mmse[i], ex.x_mmse[i], 0.05 * kPrior.sigma1) << "seed " << seed << " i " << i;
      EXPECT_NEAR(bp.q_posterior[i], ex.q_post[i], 0.02) << "seed " << seed << " i " << i;
    }
  }
}

TEST(Decoder, UndampedTreeConvergesWithinDiameter) {
  // Forest of 7 constraints: the longest path crosses at most 7 constraints,
  // so undamped messages stop changing after that many flooding rounds.
  DecoderConfig cfg;
  cfg.sigma_z2 = 0.05;
  cfg.beta_con = cfg.beta_var = 1.0;
  cfg.max_iters = 30;
  cfg.tol = 0.0;
  const auto phi = testref::forest_matrix(15, 7, 3, 3);
  const auto y = add_noise(encode(phi, sample_signal(kPrior, 15, 4).x), 0.05, 5);
  const auto r = decode(phi, y, kPrior, cfg);
  ASSERT_GE(r.telemetry.max_change.size(), 9u);
  // Zero up to rounding in the leave-one-out products.
  EXPECT_LT(r.telemetry.max_change[8], 1e-12);
  EXPECT_GT(r.telemetry.max_change[0], 1e-3);
}

TEST(Decoder, Deterministic) {
  const auto phi = random_matrix(200, 80, 10, 1);
  const auto y = encode(phi, sample_signal(kPrior, 200, 2).x);
  for (Codec codec : {Codec::grid, Codec::mog}) {
    DecoderConfig cfg;
    cfg.codec = codec;
    cfg.max_iters = 6;
    const auto a = decode(phi, y, kPrior, cfg), b = decode(phi, y, kPrior, cfg);
    EXPECT_EQ(a.x_mmse, b.x_mmse);
    EXPECT_EQ(a.q_posterior, b.q_posterior);
    EXPECT_EQ(a.telemetry.max_change, b.telemetry.max_change);
  }
}

TEST(Decoder, TelemetryShape) {
  const auto phi = random_matrix(100, 40, 10, 3);
  const auto y = encode(phi, sample_signal(kPrior, 100, 3).x);
  DecoderConfig cfg;
  const auto r = decode(phi, y, kPrior, cfg);
  EXPECT_EQ(cfg.resolve_max_iters(100), 14u);
  EXPECT_LE(r.iters_run, 14u);
  EXPECT_EQ(r.telemetry.max_change.size(), r.iters_run);
  EXPECT_EQ(r.converged, r.telemetry.max_change.back() <= cfg.tol);
  for (double q : r.q_posterior) {
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST(Decoder, ResidualSmallWhenDecodingWell) {
  const auto phi = random_matrix(300, 150, 10, 5);
  const auto sig = sample_signal(kPrior, 300, 6);
  const auto y = encode(phi, sig.x);
  const auto r = decode(phi, y, kPrior, DecoderConfig{});
  const double floor = std::sqrt(300 * 0.9);
  const double err = testref::l2_dist(r.x_mmse, sig.x);
  double ynorm = 0.0;
  for (double v : y) ynorm += v * v;
  ASSERT_LT(err, floor);
  EXPECT_LT(r.residual_l2 / std::sqrt(ynorm), 0.1);
}

TEST(Decoder, CodecsAgreeAfterOneIteration) {
  const auto phi = random_matrix(100, 50, 5, 7);
  const auto y = add_noise(encode(phi, sample_signal(kPrior, 100, 8).x), 0.5, 9);
  DecoderConfig g;
  g.sigma_z2 = 0.5;
  g.max_iters = 1;
  DecoderConfig m = g;
  m.codec = Codec::mog;
  const auto rg = decode(phi, y, kPrior, g), rm = decode(phi, y, kPrior, m);
  const double delta = g.resolve_grid(kPrior).delta();
  for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(rg.x_mmse[i], rm.x_mmse[i], 3 * delta) << i;
}

TEST(Decoder, MixtureCodecNoiselessSingleEdge) {
  const SparseSignMatrix phi(1, 1, {{{0, 1}}});
  DecoderConfig cfg;
  cfg.codec = Codec::mog;
  const auto r = decode(phi, std::vector<double>{4.0}, kPrior, cfg);
  EXPECT_NEAR(r.x_mmse[0], 4.0, 0.05);
}

TEST(Decoder, ContradictoryEvidenceIsNotFatal) {
  // Two noiseless constraints pin x0 to -55 and to +55: the product of the
  // constraint messages lives entirely in the clamped tails.
  const SparseSignMatrix phi(1, 1, {{{0, 1}}, {{0, 1}}});
  DecoderConfig cfg;
  cfg.max_iters = 3;
  const auto r = decode(phi, std::vector<double>{-55.0, 55.0}, kPrior, cfg);
  EXPECT_TRUE(std::isfinite(r.x_mmse[0]));
  EXPECT_TRUE(std::isfinite(r.q_posterior[0]));
}

TEST(Decoder, OffGridMeasurementIsReported) {
  // y far beyond the grid: the constraint message loses its mass off the grid.
  const SparseSignMatrix phi(2, 2, {{{0, 1}, {1, 1}}});
  DecoderConfig cfg;
  cfg.max_iters = 2;
  const auto r = decode(phi, std::vector<double>{500.0}, kPrior, cfg);
  EXPECT_TRUE(std::isfinite(r.x_mmse[0]));
  EXPECT_GT(r.telemetry.degenerate_messages + r.telemetry.clipped_warnings, 0u);
}

TEST(Decoder, InputErrors) {
  const auto phi = random_matrix(20, 8, 4, 1);
  DecoderConfig cfg;
  EXPECT_THROW(decode(phi, std::vector<double>(7, 0.0), kPrior, cfg), ShapeError);
  std::vector<double> bad(8, 0.0);
  bad[3] = NAN;
  EXPECT_THROW(decode(phi, bad, kPrior, cfg), InputError);
  cfg.beta_con = 0.0;
  EXPECT_THROW(decode(phi, std::vector<double>(8, 0.0), kPrior, cfg), ParameterError);
  EXPECT_THROW(parse_codec("fft"), ParameterError);
  EXPECT_EQ(parse_codec(to_string(Codec::mog)), Codec::mog);
}

TEST(ProgressiveDecode, EndpointsAndErrors) {
  const auto phi = random_matrix(100, 40, 10, 2);
  const auto y = encode(phi, sample_signal(kPrior, 100, 2).x);
  DecoderConfig cfg;
  const std::vector<std::size_t> pre{0, 40};
  const auto rs = progressive_decode(phi, y, pre, kPrior, cfg);
  ASSERT_EQ(rs.size(), 2u);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(rs[0].x_mmse[i], 0.0);
    EXPECT_EQ(rs[0].q_posterior[i], kPrior.s);
  }
  EXPECT_EQ(rs[1].x_mmse, decode(phi, y, kPrior, cfg).x_mmse);
  const std::vector<std::size_t> too_long{41};
  EXPECT_THROW(progressive_decode(phi, y, too_long, kPrior, cfg), ParameterError);
}

TEST(ProgressiveDecode, MoreRowsHelpInTheMedian) {
  std::vector<double> half, full;
  DecoderConfig cfg;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto phi = random_matrix(200, 100, 10, 1000 + t);
    const auto sig = sample_signal(kPrior, 200, t);
    const auto y = encode(phi, sig.x);
    const std::vector<std::size_t> pre{50, 100};
    const auto rs = progressive_decode(phi, y, pre, kPrior, cfg);
    half.push_back(testref::l2_dist(rs[0].x_mmse, sig.x));
    full.push_back(testref::l2_dist(rs[1].x_mmse, sig.x));
  }
  EXPECT_LT(testref::median(full), testref::median(half));
}
