#include <benchmark/benchmark.h>

#include "latwalk/census.hpp"
#include "latwalk/cone_palm.hpp"
#include "latwalk/lattice_walk.hpp"
#include "latwalk/pivot_chain.hpp"

using namespace latwalk;

static void BM_SiltCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(SeededSource{1, 0});
  const auto path = sample_srw(n, 2, rng);
  const auto trace = path.sites();
  for (auto _ : state) benchmark::DoNotOptimize(silt_count(trace));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SiltCount)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_PivotStep(benchmark::State& state) {
  ChainSettings s;
  s.n = static_cast<std::size_t>(state.range(0));
  s.beta = 1.0;
  PivotChain chain(s, Rng(SeededSource{2, 0}));
  for (std::size_t i = 0; i < 10 * s.n; ++i) chain.step();
  for (auto _ : state) benchmark::DoNotOptimize(chain.step());
}
BENCHMARK(BM_PivotStep)->Arg(129)->Arg(513)->Arg(1025);

static void BM_SawCensus(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_saw(static_cast<std::size_t>(state.range(0)), 2));
}
BENCHMARK(BM_SawCensus)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);

static void BM_ConeDecompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(SeededSource{3, 0});
  const auto proc = extract_process(sample_srw(n, 2, rng));
  const auto lines = TestLineSet::for_length(n);
  for (auto _ : state) benchmark::DoNotOptimize(cone_decompose(proc, lines));
}
BENCHMARK(BM_ConeDecompose)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK_MAIN();
