#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "csbp/csldpc.hpp"
#include "csbp/decoder.hpp"
#include "csbp/gauss_mixture.hpp"
#include "csbp/grid_pdf.hpp"
#include "csbp/oracles.hpp"
#include "csbp/signal_model.hpp"

using namespace csbp;

namespace {

const MixturePrior kPrior{0.1, 1.0, 10.0};

struct Instance {
  SparseSignMatrix phi;
  std::vector<double> x, y;
};

Instance make_instance(std::size_t n, std::size_t m, std::size_t l) {
  MatrixParams p;
  p.n = n;
  p.m = m;
  p.l = l;
  p.seed = 1;
  Instance inst{generate_matrix(p), sample_signal(kPrior, n, 2).x, {}};
  inst.y = encode(inst.phi, inst.x);
  return inst;
}

void BM_GridConvolve(benchmark::State& state) {
  const Grid g(static_cast<std::size_t>(state.range(0)), 0.5);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(g.size()), b(g.size());
  for (auto& v : a) v = u(gen);
  for (auto& v : b) v = u(gen);
  const GridPdf pa(g, a), pb(g, b);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(pa, pb));
}
BENCHMARK(BM_GridConvolve)->Arg(129)->Arg(243)->Arg(525);

void BM_IpraReduce(benchmark::State& state) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> w(0.2, 1.0), mu(-6, 6), var(0.5, 4.0);
  std::vector<Gaussian> c(static_cast<std::size_t>(state.range(0)));
  for (auto& g : c) g = {w(gen), mu(gen), var(gen)};
  const GaussMixture m(c);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_ipra(m, 6));
}
BENCHMARK(BM_IpraReduce)->Arg(12)->Arg(36);

// One flooding iteration at N = 1000, M = 400, L = 20.
void BM_DecodeIteration(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)),
                                  static_cast<std::size_t>(state.range(0)) * 2 / 5, 20);
  DecoderConfig cfg;
  cfg.codec = state.range(1) ? Codec::mog : Codec::grid;
  cfg.max_iters = 1;
  for (auto _ : state) benchmark::DoNotOptimize(decode(inst.phi, inst.y, kPrior, cfg));
}
BENCHMARK(BM_DecodeIteration)->Args({1000, 0})->Args({1000, 1})->Unit(benchmark::kMillisecond);

void BM_Iht(benchmark::State& state) {
  const auto inst = make_instance(1000, 400, 20);
  for (auto _ : state) benchmark::DoNotOptimize(iht_decode(inst.phi, inst.y, 100));
}
BENCHMARK(BM_Iht)->Unit(benchmark::kMillisecond);

void BM_MedianDecode(benchmark::State& state) {
  const auto inst = make_instance(1000, 400, 20);
  for (auto _ : state) benchmark::DoNotOptimize(median_decode(inst.phi, inst.y));
}
BENCHMARK(BM_MedianDecode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
