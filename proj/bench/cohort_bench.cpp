// Serial reference vs OpenMP per-chain analysis on synthetic cohorts.

#include <map>

#include <benchmark/benchmark.h>

#include "phasechain/chain.hpp"
#include "phasechain/cohort.hpp"
#include "phasechain/reduction.hpp"

namespace {

struct Fixture {
  phasechain::ChainDataset dataset;
  phasechain::PcaModel model;
};

const Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    phasechain::SynthParams params;
    params.n_valid = n / 2;
    params.n_invalid = n - n / 2;
    params.dimension = 64;
    params.steps = 8;
    Fixture f;
    f.dataset = phasechain::synth_dataset(params);
    f.model = phasechain::fit_pca(f.dataset, 3);
    it = cache.emplace(n, std::move(f)).first;
  }
  return it->second;
}

void run(benchmark::State& state, phasechain::Execution execution) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto records = phasechain::analyze_chains(f.dataset, f.model, {}, execution);
    benchmark::DoNotOptimize(records.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetComplexityN(state.range(0));
}

void BM_AnalyzeSerial(benchmark::State& state) { run(state, phasechain::Execution::serial); }
void BM_AnalyzeParallel(benchmark::State& state) { run(state, phasechain::Execution::parallel); }

}  // namespace

BENCHMARK(BM_AnalyzeSerial)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);
BENCHMARK(BM_AnalyzeParallel)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

BENCHMARK_MAIN();
