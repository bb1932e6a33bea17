#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "wavesearch/quantum_coherent.hpp"
#include "wavesearch/search_core.hpp"
#include "wavesearch/wave_engine.hpp"

namespace {

using namespace wavesearch;

void BM_GroverIterate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::uint64_t q = optimal_queries(n).q_optimal;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grover_iterate(n, 0, q));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GroverIterate)
    ->RangeMultiplier(4)
    ->Range(16, 16384)
    ->Complexity([](benchmark::IterationCount n) {
      return static_cast<double>(n) * std::sqrt(static_cast<double>(n));
    });

void BM_WaveSearchExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::uint64_t q = optimal_queries(n).q_optimal;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_search(Family::B, 1, n, {0}, 1.0, q));
  }
}
BENCHMARK(BM_WaveSearchExact)->RangeMultiplier(4)->Range(16, 4096);

void BM_EvolveNumericPeriod(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto params = family_params(Family::A, 1, n);
  const auto start = initial_conditions(InitialKind::uniform, 1.0, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_numeric(start, params, 4.0 * 3.141592653589793, 1e-3));
  }
}
BENCHMARK(BM_EvolveNumericPeriod)->Arg(4)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RandomStop(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_stop_gain(Family::B, 1, 4, {0}, 100000, 1));
  }
}
BENCHMARK(BM_RandomStop)->Unit(benchmark::kMillisecond);

void BM_TappedFrame(benchmark::State& state) {
  const auto tapped = tapped_state(std::complex<double>(-2.0, 0.0));
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < 201; ++i) {
      acc += std::norm(tapped_wavefunction_at(tapped, -10.0 + 0.1 * i));
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_TappedFrame);

}  // namespace

BENCHMARK_MAIN();
