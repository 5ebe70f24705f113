// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "twinbeam/analytic.hpp"
#include "twinbeam/sampler.hpp"

namespace twinbeam {

/// Sample moments of a batch of pulses (unbiased, divisor n - 1). var_diff is
/// estimated directly from the per-pulse differences.
using MomentSummary = PhotocountMoments;

MomentSummary moments(std::span<const PulseRecord> records);
inline MomentSummary moments(const SampleSet& samples) { return moments(samples.records); }

/// Normally ordered plug-in estimates:
/// g_aa = <Na^2 - Na> / <Na>^2, g12 = <N1 N2> / (<N1> <N2>).
CorrelationTriple g2_estimates(std::span<const PulseRecord> records);
inline CorrelationTriple g2_estimates(const SampleSet& samples) { return g2_estimates(samples.records); }

/// Readout-noise model subtracted from the measured moments.
struct NoiseCalibration {
  double offset1 = 0.0;
  double offset2 = 0.0;
  double variance1 = 0.0;
  double variance2 = 0.0;

  /// Zero offsets and the configured sigma_e^2 per channel.
  static NoiseCalibration from_config(const ExperimentConfig& config);
};

/// Dark-run calibration: mean and variance of each channel's reading from
/// pulses recorded with no light.
NoiseCalibration estimate_dark_noise(std::span<const PulseRecord> dark_records);

struct NrfEstimateOptions {
  bool subtract_noise = true;
  /// Overrides the configured sigma_e when set (e.g. from a dark run).
  std::optional<NoiseCalibration> noise;
  int bootstrap_resamples = 1000;
  double confidence_level = 0.95;
  /// Seed of the resampling streams; defaults to one derived from the sample seed.
  std::optional<std::uint64_t> bootstrap_seed;
  int workers = 1;
};

/// Minimum batch size for which a bootstrap interval is reported.
inline constexpr std::size_t kMinRecordsForInterval = 100;

/// NRF = (var_diff - noise variance) / (mean1 + mean2) with a percentile
/// bootstrap interval. A negative numerator is reported as-is and flagged
/// low_signal. The contributions field is left zero.
NrfReport nrf_estimate(const SampleSet& samples, const NrfEstimateOptions& options = {});

}  // namespace twinbeam
