#include <benchmark/benchmark.h>

#include "common.hpp"
#include "convspec/approximation.hpp"
#include "convspec/density.hpp"
#include "convspec/operators.hpp"
#include "convspec/svd.hpp"

using namespace convspec;

// Args: channels, kernel side, n.

static void BM_Exact(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(exact_spectrum(build_T(b)));
}
BENCHMARK(BM_Exact)->Args({8, 3, 10})->Args({16, 3, 10})->Unit(benchmark::kMillisecond);

static void BM_Circular(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(circular_spectrum(b));
}
BENCHMARK(BM_Circular)->Args({8, 3, 10})->Args({16, 3, 10})->Unit(benchmark::kMillisecond);

static void BM_SampleGrid(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(2));
  const SpectralDensity f = make_density(b);
  for (auto _ : state) benchmark::DoNotOptimize(sample_grid(f, b.n()));
}
BENCHMARK(BM_SampleGrid)
    ->Args({8, 3, 10})
    ->Args({64, 3, 10})
    ->Args({64, 3, 32})
    ->Unit(benchmark::kMillisecond);

static void BM_Quantile(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(quantile_spectrum(b, b.n()));
}
BENCHMARK(BM_Quantile)->Args({8, 3, 10})->Args({64, 3, 10})->Unit(benchmark::kMillisecond);

static void BM_QuantileKernel(benchmark::State& state) {
  const Bundle b = bench_bundle(state.range(0), state.range(1), state.range(2));
  QuantileConfig cfg;
  cfg.mode = InterpolationMode::kKernel;
  for (auto _ : state) benchmark::DoNotOptimize(quantile_spectrum(b, b.n(), cfg));
}
BENCHMARK(BM_QuantileKernel)->Args({8, 3, 10})->Unit(benchmark::kMillisecond);
