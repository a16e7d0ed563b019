#include <benchmark/benchmark.h>

#include "poisest/montecarlo.hpp"
#include "poisest/synth.hpp"

using namespace poisest;

static void BM_PoissonDraw(benchmark::State& state) {
  const PoissonSampler sampler(static_cast<double>(state.range(0)));
  Stream s(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler(s));
}
BENCHMARK(BM_PoissonDraw)->Arg(1)->Arg(8)->Arg(10)->Arg(100)->Arg(10000);

static void BM_BivariateMeans(benchmark::State& state) {
  const GammaTriple g(4.1813, 8.104, 2.112);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(draw_bivariate_means(g, state.range(0), {seed++}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BivariateMeans)->Arg(20)->Arg(200);

static void BM_ReplicateSet(benchmark::State& state) {
  McConfig cfg;
  cfg.gammas = GammaTriple(4.1813, 8.104, 2.112);
  cfg.n = 200;
  cfg.replicates = state.range(0);
  cfg.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_replicates(cfg));
    ++cfg.master_seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicateSet)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Summarize(benchmark::State& state) {
  McConfig cfg;
  cfg.gammas = GammaTriple(4.1813, 8.104, 2.112);
  cfg.n = 200;
  cfg.replicates = 100000;
  cfg.workers = 1;
  const ReplicateSet reps = simulate_replicates(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(summarize(reps, ExpAlpha{0.41346}, cfg));
}
BENCHMARK(BM_Summarize)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
