#include "wpvol/geodesics.hpp"
#include "wpvol/trace.hpp"
#include "wpvol/volume.hpp"

#include <benchmark/benchmark.h>

using namespace wpvol;

namespace {

void BM_TauColdCache(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const IntersectionEngine e;
    benchmark::DoNotOptimize(volume(e, g, n));
    state.counters["cache_entries"] = static_cast<double>(e.cache()->size());
  }
}
BENCHMARK(BM_TauColdCache)->Args({4, 3})->Args({6, 4})->Args({8, 5})->Unit(benchmark::kMillisecond);

void BM_TauWarmCache(benchmark::State& state) {
  const IntersectionEngine e;
  (void)volume(e, 8, 5);
  for (auto _ : state) benchmark::DoNotOptimize(volume(e, 8, 5));
}
BENCHMARK(BM_TauWarmCache);

void BM_VolumePolynomial(benchmark::State& state) {
  const IntersectionEngine e;
  const int g = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  (void)volume(e, g, n);
  for (auto _ : state) benchmark::DoNotOptimize(volume_polynomial(e, g, n));
}
BENCHMARK(BM_VolumePolynomial)->Args({3, 2})->Args({5, 3})->Unit(benchmark::kMicrosecond);

void BM_ClosedVolume(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const IntersectionEngine e;
    benchmark::DoNotOptimize(closed_volume(e, g));
  }
}
BENCHMARK(BM_ClosedVolume)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_EvalPoly(benchmark::State& state) {
  const IntersectionEngine e;
  const PolynomialEvaluator ev(volume_polynomial(e, 4, 2));
  const std::vector<double> x{3.5, 7.25};
  for (auto _ : state) benchmark::DoNotOptimize(ev(x));
}
BENCHMARK(BM_EvalPoly);

void BM_Li(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(li(1e9));
}
BENCHMARK(BM_Li);

void BM_CountIdentity(benchmark::State& state) {
  SyntheticOptions o;
  o.max_length = 6.0;
  const LengthSpectrum s = synthetic_spectrum(o);
  const BumpFamily eta = BumpFamily::counting();
  for (auto _ : state) benchmark::DoNotOptimize(count_identity(eta, s, 5.5, 0.005, 1));
}
BENCHMARK(BM_CountIdentity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
