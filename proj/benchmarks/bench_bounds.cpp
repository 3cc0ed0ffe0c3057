#include <benchmark/benchmark.h>

#include "common.hpp"
#include "convspec/bounds.hpp"

using namespace convspec;

// Args: channels, kernel side. The bounds do not depend on n.

static void BM_BoundReshape(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bound_reshape(b));
}
BENCHMARK(BM_BoundReshape)->Args({64, 3})->Args({256, 3})->Args({512, 3})
    ->Unit(benchmark::kMillisecond);

static void BM_BoundOneInf(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), 10);
  for (auto _ : state) benchmark::DoNotOptimize(bound_one_inf(b));
}
BENCHMARK(BM_BoundOneInf)->Args({64, 3})->Args({256, 3})->Unit(benchmark::kMillisecond);

static void BM_BoundSumBlocks(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bound_sum_blocks(b));
}
BENCHMARK(BM_BoundSumBlocks)->Args({64, 3})->Args({256, 3})->Args({512, 3})
    ->Unit(benchmark::kMillisecond);
