// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "twinbeam/error.hpp"
#include "twinbeam/estimator.hpp"

namespace twinbeam {
namespace {

ExperimentConfig make_config(ModePartition partition, double mean, double eta1 = 1.0, double eta2 = 1.0) {
  ExperimentConfig c;
  c.partition = partition;
  c.mean_photons_per_mode = mean;
  c.signal_channel.efficiency = eta1;
  c.idler_channel.efficiency = eta2;
  return c;
}

std::vector<PulseRecord> records_from(const std::vector<std::pair<double, double>>& values) {
  std::vector<PulseRecord> out;
  for (auto [a, b] : values) out.push_back({0, 0, a, b});
  return out;
}

TEST(Moments, IdenticalChannelsHaveNoDifferenceVariance) {
  const auto r = records_from({{3, 3}, {7, 7}, {1, 1}, {10, 10}});
  EXPECT_EQ(moments(r).var_diff, 0.0);
}

TEST(Moments, HandComputedDifferenceVariance) {
  const auto r = records_from({{0, 1}, {1, 0}});
  const MomentSummary mo = moments(r);
  EXPECT_DOUBLE_EQ(mo.var_diff, 2.0);
  EXPECT_DOUBLE_EQ(mo.var1, 0.5);
  EXPECT_DOUBLE_EQ(mo.cov, -0.5);
}

TEST(Moments, NeedsTwoRecords) {
  EXPECT_THROW(moments(records_from({{1, 1}})), ComputationError);
  EXPECT_THROW(moments(std::vector<PulseRecord>{}), ComputationError);
}

TEST(MomentsProperty, DifferenceVarianceIdentity) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> x(100.0, 15.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PulseRecord> r;
    for (int i = 0; i < 500; ++i) {
      const double a = x(rng);
      r.push_back({0, 0, a, 0.6 * a + 0.5 * x(rng)});
    }
    const MomentSummary mo = moments(r);
    EXPECT_NEAR(mo.var_diff, mo.var1 + mo.var2 - 2.0 * mo.cov, 1e-9 * mo.var_diff);
  }
}

TEST(G2Estimates, SingleThermalMode) {
  const SampleSet s = simulate(make_config({0, 1, 1}, 3.0), 1'000'000, 12);
  const CorrelationTriple g = g2_estimates(s);
  EXPECT_NEAR(g.g11, 2.0, 0.02);
  EXPECT_NEAR(g.g22, 2.0, 0.02);
  EXPECT_NEAR(g.g12, 1.0, 0.01);
}

TEST(G2Estimates, MultimodeMatchedPairs) {
  // g11 = 1 + 1/m = 1.01, g12 = 1 + (N + 1) / (m N) = 1.02.
  const SampleSet s = simulate(make_config({100, 0, 0}, 1.0), 100000, 13);
  const CorrelationTriple g = g2_estimates(s);
  EXPECT_NEAR(g.g11, 1.01, 0.004);
  EXPECT_NEAR(g.g22, 1.01, 0.004);
  EXPECT_NEAR(g.g12, 1.02, 0.004);
}

TEST(G2Estimates, PoissonianArmsAreCoherent) {
  ExperimentConfig c = make_config({0, 1, 1}, 0.0);
  c.background_signal = 20.0;
  c.background_idler = 30.0;
  const CorrelationTriple g = g2_estimates(simulate(c, 200000, 14));
  EXPECT_NEAR(g.g11, 1.0, 0.005);
  EXPECT_NEAR(g.g22, 1.0, 0.005);
  EXPECT_NEAR(g.g12, 1.0, 0.005);
}

TEST(G2Estimates, ZeroMeanIsAnError) {
  EXPECT_THROW(g2_estimates(records_from({{0, 1}, {0, 2}})), ComputationError);
}

TEST(G2EstimatesProperty, PlugInVarianceIdentity) {
  // The g-based formula for Var(N1 - N2), fed plug-in g's and means, reproduces the plug-in
  // (divisor n) difference variance.
  const ExperimentConfig configs[] = {make_config({20, 3, 0}, 2.0, 0.8, 0.6), make_config({5, 0, 4}, 0.3, 1.0, 0.9)};
  std::uint64_t seed = 50;
  for (const ExperimentConfig& c : configs) {
    const SampleSet s = simulate(c, 20000, seed++);
    const MomentSummary mo = moments(s);
    const CorrelationTriple g = g2_estimates(s);
    const double n = static_cast<double>(s.records.size());
    const double plug_in = mo.var_diff * (n - 1.0) / n;
    EXPECT_NEAR(variance_difference(mo.mean1, mo.mean2, g), plug_in, 1e-8 * plug_in);
  }
}

TEST(NrfEstimate, IdealSqueezedVacuumHasDegenerateInterval) {
  const NrfReport r = nrf_estimate(simulate(make_config({100, 0, 0}, 5.0), 2000, 3));
  EXPECT_EQ(r.nrf, 0.0);
  ASSERT_TRUE(r.ci);
  EXPECT_EQ(r.ci->low, 0.0);
  EXPECT_EQ(r.ci->high, 0.0);
  EXPECT_FALSE(r.low_signal);
}

TEST(NrfEstimate, EqualLossMatchesAnalytic) {
  const NrfReport r = nrf_estimate(simulate(make_config({50, 0, 0}, 1.0, 0.7, 0.7), 100000, 4));
  ASSERT_TRUE(r.ci);
  EXPECT_LE(r.ci->low, 0.30);
  EXPECT_GE(r.ci->high, 0.30);
}

TEST(NrfEstimate, IndependentThermalArms) {
  const NrfReport r = nrf_estimate(simulate(make_config({0, 10, 10}, 1.0), 100000, 5));
  ASSERT_TRUE(r.ci);
  EXPECT_LE(r.ci->low, 2.0);
  EXPECT_GE(r.ci->high, 2.0);
}

TEST(NrfEstimate, SmallBatchHasNoInterval) {
  const NrfReport r = nrf_estimate(simulate(make_config({10, 0, 0}, 1.0, 0.5, 0.5), 99, 6));
  EXPECT_FALSE(r.ci);
}

TEST(NrfEstimate, NegativeNumeratorIsReportedNotClamped) {
  ExperimentConfig c = make_config({10, 0, 0}, 1.0, 1.0, 1.0);
  c.signal_channel.electronic_noise_rms = 5.0;
  c.idler_channel.electronic_noise_rms = 5.0;
  NrfEstimateOptions opt;
  NoiseCalibration overstated = NoiseCalibration::from_config(c);
  overstated.variance1 *= 3.0;
  opt.noise = overstated;
  const NrfReport r = nrf_estimate(simulate(c, 5000, 7), opt);
  EXPECT_TRUE(r.low_signal);
  EXPECT_LT(r.nrf, 0.0);
}

TEST(NrfEstimate, NoiseSubtractionRecoversNoiselessValue) {
  ExperimentConfig quiet = make_config({3750, 0, 0}, 13.0, 0.77, 0.70);
  ExperimentConfig noisy = quiet;
  noisy.signal_channel.electronic_noise_rms = 180.0;
  noisy.idler_channel.electronic_noise_rms = 180.0;
  NrfEstimateOptions opt;
  opt.bootstrap_resamples = 300;
  const NrfReport reference = nrf_estimate(simulate(quiet, 100000, 8), opt);
  const NrfReport subtracted = nrf_estimate(simulate(noisy, 100000, 8), opt);
  opt.subtract_noise = false;
  const NrfReport raw = nrf_estimate(simulate(noisy, 100000, 8), opt);

  EXPECT_NEAR(subtracted.nrf, reference.nrf, 4.0 * subtracted.standard_error);
  EXPECT_GT(raw.nrf, subtracted.nrf + 0.5);
}

TEST(NrfEstimate, DarkRunCalibration) {
  ExperimentConfig dark = make_config({3750, 0, 0}, 0.0);
  dark.signal_channel.electronic_noise_rms = 180.0;
  dark.idler_channel.electronic_noise_rms = 150.0;
  const SampleSet dark_run = simulate(dark, 50000, 9);
  const NoiseCalibration cal = estimate_dark_noise(dark_run.records);
  EXPECT_NEAR(cal.variance1, 180.0 * 180.0, 4.0 * 180.0 * 180.0 * std::sqrt(2.0 / 50000));
  EXPECT_NEAR(cal.variance2, 150.0 * 150.0, 4.0 * 150.0 * 150.0 * std::sqrt(2.0 / 50000));
  EXPECT_NEAR(cal.offset1, 0.0, 4.0 * 180.0 / std::sqrt(50000.0));

  ExperimentConfig bright = dark;
  bright.mean_photons_per_mode = 13.0;
  bright.signal_channel.efficiency = 0.77;
  bright.idler_channel.efficiency = 0.70;
  NrfEstimateOptions opt;
  opt.noise = cal;
  opt.bootstrap_resamples = 300;
  const NrfReport r = nrf_estimate(simulate(bright, 100000, 10), opt);
  EXPECT_NEAR(r.nrf, nrf_predict(bright).nrf, 4.0 * r.standard_error);
}

TEST(NrfEstimate, BootstrapIsDeterministicAcrossWorkers) {
  const SampleSet s = simulate(make_config({20, 2, 2}, 2.0, 0.9, 0.8), 20000, 11);
  NrfEstimateOptions one;
  one.bootstrap_resamples = 200;
  NrfEstimateOptions four = one;
  four.workers = 4;
  const NrfReport a = nrf_estimate(s, one);
  const NrfReport b = nrf_estimate(s, four);
  EXPECT_EQ(a.ci->low, b.ci->low);
  EXPECT_EQ(a.ci->high, b.ci->high);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(NrfEstimateProperty, BootstrapCoverage) {
  const ExperimentConfig c = make_config({50, 0, 0}, 1.0, 0.7, 0.7);
  const double truth = nrf_predict(c).nrf;
  int covered = 0;
  const int replications = 200;
  for (int rep = 0; rep < replications; ++rep) {
    const NrfReport r = nrf_estimate(simulate(c, 2000, 1000 + rep));
    covered += r.ci->low <= truth && truth <= r.ci->high;
  }
  EXPECT_GE(covered, 180) << covered << " of " << replications;
}

}  // namespace
}  // namespace twinbeam
