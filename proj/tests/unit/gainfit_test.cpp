// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "twinbeam/error.hpp"
#include "twinbeam/gainfit.hpp"

namespace twinbeam {
namespace {

std::vector<PowerPoint> synthetic_points(double c, std::int64_t m, double b, double noise, std::mt19937_64* rng,
                                         int count = 12, double max_power = 25.0) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<PowerPoint> points;
  for (int j = 1; j <= count; ++j) {
    const double p = max_power * j / count;
    const double s = std::sinh(c * std::sqrt(p));
    double n = static_cast<double>(m) * s * s + b * p;
    if (rng != nullptr) n *= 1.0 + noise * z(*rng);
    points.push_back({p, n, 1.0});
  }
  return points;
}

TEST(GoldenSection, FindsQuadraticMinimum) {
  int evals = 0;
  const double x = golden_section_minimize([](double v) { return (v - 1.234) * (v - 1.234) + 3.0; }, 0.0, 5.0,
                                           1e-10, 0.0, &evals);
  EXPECT_NEAR(x, 1.234, 1e-7);
  EXPECT_GT(evals, 10);
}

TEST(FitGainCurve, NoiselessDataRecoverExactly) {
  const auto points = synthetic_points(0.4, 3750, 0.0, 0.0, nullptr);
  const GainFit fit = fit_gain_curve(points, 3750, 0.0);
  EXPECT_NEAR(fit.gain_coefficient, 0.4, 0.4 * 1e-6);
  EXPECT_FALSE(fit.at_lower_boundary);
  ASSERT_EQ(fit.gains.size(), points.size());
  EXPECT_NEAR(fit.gains.back(), 0.4 * 5.0, 1e-5);
}

TEST(FitGainCurve, KnownBackgroundIsRemoved) {
  const auto points = synthetic_points(0.3, 500, 40.0, 0.0, nullptr);
  EXPECT_NEAR(fit_gain_curve(points, 500, 40.0).gain_coefficient, 0.3, 0.3 * 1e-6);
}

TEST(FitGainCurve, InversePhotonWeighting) {
  const auto points = synthetic_points(0.35, 1000, 0.0, 0.0, nullptr);
  GainFitOptions opt;
  opt.weighting = FitWeighting::inverse_photons;
  EXPECT_NEAR(fit_gain_curve(points, 1000, 0.0, opt).gain_coefficient, 0.35, 0.35 * 1e-6);
}

// Replication study against a known ground truth.
TEST(FitGainCurve, NoisyDataMedianErrorBelowTwoPercent) {
  std::mt19937_64 rng(123);
  std::vector<double> errors;
  for (int rep = 0; rep < 100; ++rep) {
    const auto points = synthetic_points(0.4, 3750, 0.0, 0.05, &rng);
    errors.push_back(std::abs(fit_gain_curve(points, 3750, 0.0).gain_coefficient - 0.4) / 0.4);
  }
  std::nth_element(errors.begin(), errors.begin() + 50, errors.end());
  EXPECT_LT(errors[50], 0.02);
}

TEST(FitGainCurve, PureBackgroundHitsLowerBoundary) {
  std::vector<PowerPoint> points;
  for (int j = 1; j <= 8; ++j) points.push_back({double(j), 12.5 * j, 1.0});
  const GainFit fit = fit_gain_curve(points, 3750, 12.5);
  EXPECT_TRUE(fit.at_lower_boundary);
  EXPECT_LT(fit.gain_coefficient * std::sqrt(8.0), 1e-3);
}

TEST(FitGainCurve, ResidualNormMatchesIndependentEvaluation) {
  std::mt19937_64 rng(5);
  const auto points = synthetic_points(0.4, 3750, 2.0, 0.05, &rng);
  const GainFit fit = fit_gain_curve(points, 3750, 2.0);
  double sum = 0.0;
  for (const PowerPoint& p : points) {
    const double model = 3750.0 * std::pow(std::sinh(fit.gain_coefficient * std::sqrt(p.pump_power)), 2) +
                         2.0 * p.pump_power;
    sum += (p.mean_photons - model) * (p.mean_photons - model);
  }
  EXPECT_NEAR(fit.residual_norm, std::sqrt(sum), 1e-12 * std::sqrt(sum));
  EXPECT_NEAR(gain_curve_residual_norm(points, 3750, 2.0, fit.gain_coefficient), fit.residual_norm,
              1e-12 * fit.residual_norm);
}

TEST(FitGainCurve, InvariantUnderPowerUnitRescaling) {
  std::mt19937_64 rng(6);
  const auto points = synthetic_points(0.4, 3750, 3.0, 0.05, &rng);
  const GainFit base = fit_gain_curve(points, 3750, 3.0);
  for (double scale : {4.0, 0.25, 1000.0, 3.7}) {
    std::vector<PowerPoint> scaled = points;
    for (PowerPoint& p : scaled) p.pump_power *= scale;
    const GainFit fit = fit_gain_curve(scaled, 3750, 3.0 / scale);
    EXPECT_NEAR(fit.gain_coefficient * std::sqrt(scale), base.gain_coefficient, 1e-9 * base.gain_coefficient);
    for (std::size_t j = 0; j < points.size(); ++j) {
      EXPECT_NEAR(fit.gains[j], base.gains[j], 1e-9) << "scale " << scale << " point " << j;
    }
  }
}

TEST(FitGainCurve, RejectsDegenerateInput) {
  const auto points = synthetic_points(0.4, 3750, 0.0, 0.0, nullptr);
  EXPECT_THROW(fit_gain_curve(std::span(points).first(2), 3750, 0.0), ConfigError);
  EXPECT_THROW(fit_gain_curve(points, 0, 0.0), ConfigError);
  EXPECT_THROW(fit_gain_curve(points, 3750, -1.0), ConfigError);

  std::vector<PowerPoint> same_power(4, PowerPoint{2.0, 100.0, 1.0});
  EXPECT_THROW(fit_gain_curve(same_power, 3750, 0.0), ConfigError);

  auto bad = points;
  bad[3].pump_power = 0.0;
  EXPECT_THROW(fit_gain_curve(bad, 3750, 0.0), ConfigError);
  bad = points;
  bad[1].mean_photons = -5.0;
  EXPECT_THROW(fit_gain_curve(bad, 3750, 0.0), ConfigError);
}

TEST(FitGainCurve, NoBracketWhenGainExceedsGrid) {
  // Gain of 15 at the top power is beyond the coarse grid.
  const auto points = synthetic_points(3.0, 10, 0.0, 0.0, nullptr);
  EXPECT_THROW(fit_gain_curve(points, 10, 0.0), ComputationError);
}

}  // namespace
}  // namespace twinbeam
