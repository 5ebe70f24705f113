// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "twinbeam/model.hpp"
#include "twinbeam/rng.hpp"

namespace twinbeam {

/// Detected signal (1) and idler (2) photoelectrons for one pulse. `counts`
/// are the integer photoelectron numbers before readout noise; `n1`/`n2` are
/// the analog readings with Gaussian electronic noise added.
struct PulseRecord {
  std::int64_t counts1 = 0;
  std::int64_t counts2 = 0;
  double n1 = 0.0;
  double n2 = 0.0;
};

inline constexpr std::int64_t kDefaultChunkSize = 4096;

struct SampleSet {
  std::vector<PulseRecord> records;
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::int64_t n_pulses = 0;
  std::int64_t chunk_size = kDefaultChunkSize;
};

/// One draw from the thermal distribution P(n) = N^n / (1 + N)^(n + 1) by
/// inverting the geometric CDF on a single uniform.
std::int64_t sample_thermal(double mean_photons, PhiloxEngine& rng);

/// Sum of `modes` independent thermal draws. Small counts add individual
/// draws; larger counts sample the negative binomial sum directly as a
/// gamma-mixed Poisson.
std::int64_t sample_thermal_sum(std::int64_t modes, double mean_photons, PhiloxEngine& rng);

/// Keeps each of `photons` independently with probability `efficiency`.
std::int64_t thin(std::int64_t photons, double efficiency, PhiloxEngine& rng);

/// One pulse. Photon numbers come from `photons`, readout noise from `noise`.
PulseRecord sample_pulse(const ExperimentConfig& config, PhiloxEngine& photons, PhiloxEngine& noise);

/// Generates `n_pulses` pulses in chunks of `chunk_size`. Chunk c draws from
/// the Philox streams (seed, photons/c) and (seed, readout_noise/c), so the
/// output is bit-identical for any `workers`.
SampleSet simulate(const ExperimentConfig& config, std::int64_t n_pulses, std::uint64_t seed,
                   int workers = 1, std::int64_t chunk_size = kDefaultChunkSize);

/// Runs `task(i)` for i in [0, count) on up to `workers` threads. Tasks must
/// write to disjoint state.
template <typename Task>
void parallel_for(std::int64_t count, int workers, Task&& task);

}  // namespace twinbeam

#include "twinbeam/detail/parallel.hpp"
