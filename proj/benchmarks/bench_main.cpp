#include <benchmark/benchmark.h>

#include "stablecx/complexity.hpp"
#include "stablecx/empirical_sums.hpp"
#include "stablecx/stable.hpp"

using namespace stablecx;

static void BM_SamplerDraw(benchmark::State& state) {
  const StableSampler sampler(StableParams(static_cast<double>(state.range(0)) / 10.0, 0.3, 1.0, 0.0));
  const CounterStream rng(1);
  std::uint64_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng, 0, j++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplerDraw)->Arg(10)->Arg(15)->Arg(20);

static void BM_SampleBatch(benchmark::State& state) {
  const StableParams law(1.5, 0.0, 1.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample(law, 1 << 16, 7, Workers{1}));
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_SampleBatch);

static void BM_ExactRademacher(benchmark::State& state) {
  const FunctionClassTable t = generate_instance(static_cast<std::size_t>(state.range(0)), 8, 2, 1.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(rademacher_complexity_exact(t.psi(), Workers{1}));
}
BENCHMARK(BM_ExactRademacher)->DenseRange(10, 20, 5)->Unit(benchmark::kMillisecond);

static void BM_AbsMoment(benchmark::State& state) {
  const StableParams law(1.5, 0.0, 1.0, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(abs_moment(law, 1.0));
}
BENCHMARK(BM_AbsMoment)->Unit(benchmark::kMicrosecond);

static void BM_StableComplexity(benchmark::State& state) {
  const FunctionClassTable t = generate_instance(5, 8, 4, 1.5, 4);
  const StableParams law(1.5, 0.0, 1.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(stable_complexity_mc(t, law, 10000, 1, Workers{1}));
}
BENCHMARK(BM_StableComplexity)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
