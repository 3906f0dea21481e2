#include <benchmark/benchmark.h>

#include "stable_msu/density.hpp"
#include "stable_msu/factorizations.hpp"
#include "stable_msu/kanter.hpp"
#include "stable_msu/msu.hpp"
#include "stable_msu/specfun.hpp"

namespace {

using namespace stable_msu;

void BM_DensitySeries(benchmark::State& state) {
  const StableSeries s(Alpha(0.5));
  const double x = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(s.density(x));
}
BENCHMARK(BM_DensitySeries)->Arg(5)->Arg(100)->Arg(5000);

void BM_DensityJet(benchmark::State& state) {
  const StableSeries s(Alpha(0.7));
  for (auto _ : state) benchmark::DoNotOptimize(s.jet(1.0));
}
BENCHMARK(BM_DensityJet);

void BM_DensitySeriesMpfr(benchmark::State& state) {
  SeriesConfig cfg;
  cfg.precision_bits = static_cast<int>(state.range(0));
  const StableSeries s(Alpha(0.5), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(s.density(0.05));
}
BENCHMARK(BM_DensitySeriesMpfr)->Arg(128)->Arg(256);

void BM_MsuScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(msu_scan(Alpha(0.6), 0.5, 50.0, 400, {}, 1));
}
BENCHMARK(BM_MsuScan)->Unit(benchmark::kMillisecond);

void BM_KanterSampler(benchmark::State& state) {
  RandomSource rng(1);
  const Alpha a(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(sample_log_stable(a, rng));
}
BENCHMARK(BM_KanterSampler);

void BM_KanterCdf(benchmark::State& state) {
  const Alpha a(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(kanter_cdf(a, 0.01));
}
BENCHMARK(BM_KanterCdf);

void BM_BesselK(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bessel_k(1.0 / 3.0, 1.0));
}
BENCHMARK(BM_BesselK);

void BM_WhittMargin(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(whitt_margin(0.05));
}
BENCHMARK(BM_WhittMargin);

}  // namespace

BENCHMARK_MAIN();
