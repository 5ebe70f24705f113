// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/sampler.hpp"

#include <cmath>
#include <random>

#include "twinbeam/error.hpp"

namespace twinbeam {
namespace {

// Above this many modes a thermal sum is drawn as one negative binomial.
constexpr std::int64_t kDirectSumLimit = 16;

std::int64_t sample_poisson(double mean, PhiloxEngine& rng) {
  if (!(mean > 0.0)) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(rng);
}

}  // namespace

std::int64_t sample_thermal(double mean_photons, PhiloxEngine& rng) {
  if (!(mean_photons > 0.0)) return 0;
  // P(n >= j) = r^j with r = N / (1 + N); log r = -log1p(1 / N).
  const double log_ratio = -std::log1p(1.0 / mean_photons);
  return static_cast<std::int64_t>(std::floor(std::log(rng.uniform_open_zero()) / log_ratio));
}

std::int64_t sample_thermal_sum(std::int64_t modes, double mean_photons, PhiloxEngine& rng) {
  if (modes <= 0 || !(mean_photons > 0.0)) return 0;
  if (modes <= kDirectSumLimit) {
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < modes; ++i) total += sample_thermal(mean_photons, rng);
    return total;
  }
  const double intensity =
      std::gamma_distribution<double>(static_cast<double>(modes), mean_photons)(rng);
  return sample_poisson(intensity, rng);
}

std::int64_t thin(std::int64_t photons, double efficiency, PhiloxEngine& rng) {
  if (photons <= 0 || efficiency <= 0.0) return 0;
  if (efficiency >= 1.0) return photons;
  return std::binomial_distribution<std::int64_t>(photons, efficiency)(rng);
}

PulseRecord sample_pulse(const ExperimentConfig& config, PhiloxEngine& photons, PhiloxEngine& noise) {
  const ModePartition& p = config.partition;
  const double n = config.mean_photons_per_mode;

  const std::int64_t shared = sample_thermal_sum(p.matched_pairs, n, photons);
  const std::int64_t incident1 = shared + sample_thermal_sum(p.unmatched_signal, n, photons) +
                                 sample_poisson(config.background_signal, photons);
  const std::int64_t incident2 = shared + sample_thermal_sum(p.unmatched_idler, n, photons) +
                                 sample_poisson(config.background_idler, photons);

  PulseRecord record;
  record.counts1 = thin(incident1, config.signal_channel.efficiency, photons);
  record.counts2 = thin(incident2, config.idler_channel.efficiency, photons);
  record.n1 = static_cast<double>(record.counts1);
  record.n2 = static_cast<double>(record.counts2);
  if (const double sigma = config.signal_channel.electronic_noise_rms; sigma > 0.0) {
    record.n1 += std::normal_distribution<double>(0.0, sigma)(noise);
  }
  if (const double sigma = config.idler_channel.electronic_noise_rms; sigma > 0.0) {
    record.n2 += std::normal_distribution<double>(0.0, sigma)(noise);
  }
  return record;
}

SampleSet simulate(const ExperimentConfig& config, std::int64_t n_pulses, std::uint64_t seed, int workers,
                   std::int64_t chunk_size) {
  config.validate();
  if (n_pulses < 1) throw ConfigError("pulses", "must be >= 1");
  if (chunk_size < 1) throw ConfigError("chunk_size", "must be >= 1");

  SampleSet set;
  set.config = config;
  set.seed = seed;
  set.n_pulses = n_pulses;
  set.chunk_size = chunk_size;
  set.records.resize(static_cast<std::size_t>(n_pulses));

  const std::int64_t chunks = (n_pulses + chunk_size - 1) / chunk_size;
  parallel_for(chunks, workers, [&](std::int64_t chunk) {
    PhiloxEngine photons(seed, stream_id(StreamPurpose::photons, static_cast<std::uint64_t>(chunk)));
    PhiloxEngine noise(seed, stream_id(StreamPurpose::readout_noise, static_cast<std::uint64_t>(chunk)));
    const std::int64_t begin = chunk * chunk_size;
    const std::int64_t end = std::min(n_pulses, begin + chunk_size);
    for (std::int64_t i = begin; i < end; ++i) {
      set.records[static_cast<std::size_t>(i)] = sample_pulse(config, photons, noise);
    }
  });
  return set;
}

}  // namespace twinbeam
