// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "twinbeam/analytic.hpp"
#include "twinbeam/estimator.hpp"
#include "twinbeam/gainfit.hpp"
#include "twinbeam/sampler.hpp"

namespace {

twinbeam::ExperimentConfig lab_config(std::int64_t matched, std::int64_t unmatched) {
  twinbeam::ExperimentConfig c;
  c.partition = {matched, unmatched, unmatched};
  c.mean_photons_per_mode = 13.154116418008245;
  c.signal_channel = {0.77, 180.0};
  c.idler_channel = {0.70, 180.0};
  return c;
}

void BM_Simulate(benchmark::State& state) {
  const auto config = lab_config(state.range(0), state.range(0) / 16);
  const std::int64_t pulses = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(twinbeam::simulate(config, pulses, 1, static_cast<int>(state.range(1))));
  }
  state.SetItemsProcessed(state.iterations() * pulses);
}
BENCHMARK(BM_Simulate)->Args({1, 1})->Args({100, 1})->Args({3750, 1})->Args({3750, 4})->Unit(benchmark::kMillisecond);

void BM_SampleThermalSum(benchmark::State& state) {
  twinbeam::PhiloxEngine rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::sample_thermal_sum(state.range(0), 13.15, rng));
}
BENCHMARK(BM_SampleThermalSum)->Arg(1)->Arg(16)->Arg(17)->Arg(3750);

void BM_NrfPredict(benchmark::State& state) {
  const auto config = lab_config(2250, 150);
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::nrf_predict(config));
}
BENCHMARK(BM_NrfPredict);

void BM_NrfEstimateBootstrap(benchmark::State& state) {
  const auto samples = twinbeam::simulate(lab_config(2250, 150), state.range(0), 7);
  twinbeam::NrfEstimateOptions options;
  options.bootstrap_resamples = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::nrf_estimate(samples, options));
}
BENCHMARK(BM_NrfEstimateBootstrap)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_EnumerateMoments(benchmark::State& state) {
  twinbeam::ExperimentConfig c;
  c.partition = {2, 2, 2};
  c.mean_photons_per_mode = 1.0;
  c.signal_channel.efficiency = 0.8;
  c.idler_channel.efficiency = 0.6;
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::enumerate_moments(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateMoments)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FitGainCurve(benchmark::State& state) {
  std::vector<twinbeam::PowerPoint> points;
  for (int j = 1; j <= 12; ++j) {
    const double p = 25.0 * j / 12.0;
    const double s = std::sinh(0.4 * std::sqrt(p));
    points.push_back({p, 3750.0 * s * s, 1.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(twinbeam::fit_gain_curve(points, 3750, 0.0));
}
BENCHMARK(BM_FitGainCurve);

}  // namespace

BENCHMARK_MAIN();
