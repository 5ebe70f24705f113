// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "twinbeam/error.hpp"

namespace twinbeam {

MomentSummary moments(std::span<const PulseRecord> records) {
  const std::size_t n = records.size();
  if (n < 2) throw ComputationError("moments: at least 2 records are required");

  double s1 = 0.0, s2 = 0.0, sd = 0.0;
  for (const PulseRecord& r : records) {
    s1 += r.n1;
    s2 += r.n2;
    sd += r.n1 - r.n2;
  }
  const double count = static_cast<double>(n);
  MomentSummary out;
  out.mean1 = s1 / count;
  out.mean2 = s2 / count;
  const double mean_d = sd / count;

  double c11 = 0.0, c22 = 0.0, c12 = 0.0, cdd = 0.0;
  for (const PulseRecord& r : records) {
    const double x1 = r.n1 - out.mean1;
    const double x2 = r.n2 - out.mean2;
    const double xd = (r.n1 - r.n2) - mean_d;
    c11 += x1 * x1;
    c22 += x2 * x2;
    c12 += x1 * x2;
    cdd += xd * xd;
  }
  out.var1 = c11 / (count - 1.0);
  out.var2 = c22 / (count - 1.0);
  out.cov = c12 / (count - 1.0);
  out.var_diff = cdd / (count - 1.0);
  return out;
}

CorrelationTriple g2_estimates(std::span<const PulseRecord> records) {
  if (records.empty()) throw ComputationError("g2_estimates: no records");
  double s1 = 0.0, s2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (const PulseRecord& r : records) {
    s1 += r.n1;
    s2 += r.n2;
    s11 += r.n1 * r.n1;
    s22 += r.n2 * r.n2;
    s12 += r.n1 * r.n2;
  }
  const double count = static_cast<double>(records.size());
  const double m1 = s1 / count;
  const double m2 = s2 / count;
  if (m1 == 0.0 || m2 == 0.0) throw ComputationError("g2_estimates: zero mean in a channel");
  return {(s11 / count - m1) / (m1 * m1), (s22 / count - m2) / (m2 * m2), (s12 / count) / (m1 * m2)};
}

NoiseCalibration NoiseCalibration::from_config(const ExperimentConfig& config) {
  const double s1 = config.signal_channel.electronic_noise_rms;
  const double s2 = config.idler_channel.electronic_noise_rms;
  return {0.0, 0.0, s1 * s1, s2 * s2};
}

NoiseCalibration estimate_dark_noise(std::span<const PulseRecord> dark_records) {
  const MomentSummary dark = moments(dark_records);
  return {dark.mean1, dark.mean2, dark.var1, dark.var2};
}

namespace {

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::size_t draw_index(PhiloxEngine& rng, std::size_t n) {
  return std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)), n - 1);
}

}  // namespace

NrfReport nrf_estimate(const SampleSet& samples, const NrfEstimateOptions& options) {
  const std::span<const PulseRecord> records(samples.records);
  const MomentSummary mo = moments(records);

  const NoiseCalibration noise = options.noise.value_or(NoiseCalibration::from_config(samples.config));
  const double noise_variance = options.subtract_noise ? noise.variance1 + noise.variance2 : 0.0;
  const double offset1 = options.subtract_noise ? noise.offset1 : 0.0;
  const double offset2 = options.subtract_noise ? noise.offset2 : 0.0;

  NrfReport report;
  report.mean_n1 = mo.mean1 - offset1;
  report.mean_n2 = mo.mean2 - offset2;
  const double numerator = mo.var_diff - noise_variance;
  report.nrf = nrf_from_variance(numerator, report.mean_n1, report.mean_n2);
  report.low_signal = numerator < 0.0;

  if (records.size() < kMinRecordsForInterval || options.bootstrap_resamples < 2) return report;

  // Centre once so each resample needs a single pass.
  const std::size_t n = records.size();
  const double count = static_cast<double>(n);
  const double mean_d = mo.mean1 - mo.mean2;
  std::vector<double> c1(n), c2(n), cd(n);
  for (std::size_t i = 0; i < n; ++i) {
    c1[i] = records[i].n1 - mo.mean1;
    c2[i] = records[i].n2 - mo.mean2;
    cd[i] = (records[i].n1 - records[i].n2) - mean_d;
  }

  const std::uint64_t seed = options.bootstrap_seed.value_or(mix64(samples.seed ^ 0xb0075724a9ull));
  std::vector<double> replicates(static_cast<std::size_t>(options.bootstrap_resamples));
  parallel_for(options.bootstrap_resamples, options.workers, [&](std::int64_t b) {
    PhiloxEngine rng(seed, stream_id(StreamPurpose::bootstrap, static_cast<std::uint64_t>(b)));
    double s1 = 0.0, s2 = 0.0, sd = 0.0, sdd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = draw_index(rng, n);
      s1 += c1[j];
      s2 += c2[j];
      sd += cd[j];
      sdd += cd[j] * cd[j];
    }
    const double var_d = (sdd - sd * sd / count) / (count - 1.0);
    const double total = (mo.mean1 + s1 / count - offset1) + (mo.mean2 + s2 / count - offset2);
    replicates[static_cast<std::size_t>(b)] = (var_d - noise_variance) / total;
  });

  double sum = 0.0;
  for (double r : replicates) sum += r;
  const double mean_rep = sum / static_cast<double>(replicates.size());
  double ss = 0.0;
  for (double r : replicates) ss += (r - mean_rep) * (r - mean_rep);
  report.standard_error = std::sqrt(ss / static_cast<double>(replicates.size() - 1));

  std::sort(replicates.begin(), replicates.end());
  const double alpha = 1.0 - options.confidence_level;
  report.ci = ConfidenceInterval{percentile(replicates, 0.5 * alpha), percentile(replicates, 1.0 - 0.5 * alpha),
                                 options.confidence_level};
  return report;
}

}  // namespace twinbeam
