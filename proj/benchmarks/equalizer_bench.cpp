#include <benchmark/benchmark.h>

#include <cmath>

#include "tq/conv_code.hpp"
#include "tq/equalizer.hpp"
#include "tq/link.hpp"
#include "tq/rng.hpp"

namespace {

using namespace tq;

struct EqFixture {
  ChannelSpec spec;
  std::vector<Complex> received;
  LlrSequence apriori;
};

EqFixture make_fixture(const ScenarioSpec& sc, double ebno_db,
                       std::uint64_t seed) {
  EqFixture f;
  f.spec = make_channel(sc.taps, sc.modulation, noise_variance_for(ebno_db, sc));
  GaussianSampler rng(seed);
  std::vector<std::uint8_t> bits(sc.coded_bits());
  for (std::uint8_t& b : bits) b = rng.raw() >> 40 & 1u;
  f.received = apply_channel(f.spec, map_symbols(sc.modulation, bits),
                             mix64(seed));
  f.apriori.assign(sc.coded_bits(), 0.0);
  return f;
}

void equalize(benchmark::State& state, const ScenarioSpec& sc,
              const EqualizerConfig& cfg) {
  const EqFixture f = make_fixture(sc, 4.0, 0xBE);
  for (auto _ : state) {
    PosteriorResult out = run_equalizer(f.spec, f.received, f.apriori, cfg);
    benchmark::DoNotOptimize(out.extrinsic.data());
  }
  state.SetItemsProcessed(state.iterations() * sc.coded_bits());
}

void BM_Scenario1Exact(benchmark::State& state) {
  equalize(state, scenario1(), {Algorithm::exact, 0, 0});
}
void BM_Scenario1MStar(benchmark::State& state) {
  equalize(state, scenario1(),
           {Algorithm::mstar, static_cast<int>(state.range(0)), 0});
}
void BM_Scenario1M(benchmark::State& state) {
  equalize(state, scenario1(),
           {Algorithm::m, static_cast<int>(state.range(0)), 0});
}
void BM_Scenario1Rs(benchmark::State& state) {
  equalize(state, scenario1(),
           {Algorithm::rs, 0, static_cast<int>(state.range(0))});
}
void BM_Scenario2Exact(benchmark::State& state) {
  equalize(state, scenario2(), {Algorithm::exact, 0, 0});
}
void BM_Scenario2MStar(benchmark::State& state) {
  equalize(state, scenario2(),
           {Algorithm::mstar, static_cast<int>(state.range(0)), 0});
}
void BM_Scenario2Rs(benchmark::State& state) {
  equalize(state, scenario2(),
           {Algorithm::rs, 0, static_cast<int>(state.range(0))});
}

void BM_CodeSiso(benchmark::State& state) {
  const int info = static_cast<int>(state.range(0));
  GaussianSampler rng(0xC0DE);
  LlrSequence apriori(2 * (info + 5));
  for (double& l : apriori) l = -3.0 + 6.0 * rng.uniform01();
  for (auto _ : state) {
    CodeSisoResult out = decode_siso(ConvCodeSpec{}, apriori);
    benchmark::DoNotOptimize(out.aposteriori_info.data());
  }
  state.SetItemsProcessed(state.iterations() * info);
}

BENCHMARK(BM_Scenario1Exact);
BENCHMARK(BM_Scenario1MStar)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_Scenario1M)->Arg(4);
BENCHMARK(BM_Scenario1Rs)->Arg(2)->Arg(3);
BENCHMARK(BM_Scenario2Exact);
BENCHMARK(BM_Scenario2MStar)->Arg(16)->Arg(64);
BENCHMARK(BM_Scenario2Rs)->Arg(1);
BENCHMARK(BM_CodeSiso)->Arg(507)->Arg(2043);

}  // namespace

BENCHMARK_MAIN();
