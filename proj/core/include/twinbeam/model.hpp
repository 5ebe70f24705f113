// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace twinbeam {

/// Spectral band selected in one arm, in nanometres.
struct WavelengthBand {
  double min_nm = 0.0;
  double max_nm = 0.0;

  /// Band of the given width centred on `central_nm`.
  static WavelengthBand centered(double central_nm, double bandwidth_nm) {
    return {central_nm - 0.5 * bandwidth_nm, central_nm + 0.5 * bandwidth_nm};
  }
};

/// Bandwidth used when only central wavelengths are configured.
inline constexpr double kDefaultBandwidthNm = 13.0;

/// Aperture and coherence geometry of the detection setup. The idler
/// displacement is the lateral shift of the idler aperture from its matched
/// position; its sign is irrelevant.
struct OpticalGeometry {
  double signal_aperture_mm = 0.0;
  double idler_aperture_mm = 0.0;
  double idler_displacement_mm = 0.0;
  double coherence_length_mm = 0.0;
  double pulse_duration_ps = 0.0;
  double coherence_time_ps = 0.0;
  WavelengthBand signal_band;
  WavelengthBand idler_band;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

struct ModeCounts {
  std::int64_t transverse = 0;
  std::int64_t longitudinal = 0;
  std::int64_t total = 0;
};

/// Matched signal/idler mode pairs plus modes seen by only one detector.
struct ModePartition {
  std::int64_t matched_pairs = 0;
  std::int64_t unmatched_signal = 0;
  std::int64_t unmatched_idler = 0;

  std::int64_t signal_modes() const { return matched_pairs + unmatched_signal; }
  std::int64_t idler_modes() const { return matched_pairs + unmatched_idler; }

  void validate() const;

  friend bool operator==(const ModePartition&, const ModePartition&) = default;
};

/// Gain law N = m sinh^2(c sqrt(P)) + b P.
struct GainModel {
  double gain_coefficient = 0.0;  // c, per sqrt(power unit)
  double background_slope = 0.0;  // b, photons per power unit

  double gain(double pump_power) const;
  double mean_photons_per_mode(double pump_power) const;
  double background(double pump_power) const;
  /// Total photons per pulse collected from `modes` modes at `pump_power`.
  double total_photons(double pump_power, std::int64_t modes) const;

  void validate() const;
};

struct DetectionChannel {
  double efficiency = 1.0;            // eta in [0, 1]
  double electronic_noise_rms = 0.0;  // sigma_e, photoelectrons

  void validate(const char* field) const;
};

/// Everything needed to predict or simulate one experiment. Arm 1 is the
/// signal channel and arm 2 the idler channel throughout the library.
struct ExperimentConfig {
  ModePartition partition;
  double mean_photons_per_mode = 0.0;
  DetectionChannel signal_channel;
  DetectionChannel idler_channel;
  double background_signal = 0.0;  // mean photons per pulse, Poissonian
  double background_idler = 0.0;

  void validate() const;

  /// Mean detected photoelectrons per pulse in each arm.
  double mean_detected_signal() const;
  double mean_detected_idler() const;
};

/// Transverse, longitudinal and total mode counts for the signal aperture.
/// Each count is rounded to the nearest integer and is at least 1.
ModeCounts mode_counts(const OpticalGeometry& geometry);

/// Signal aperture diameter that collects the modes conjugate to an idler
/// aperture of `idler_diameter_mm`: D_s = D_i * lambda_s_min / lambda_i_max.
double matched_signal_diameter(double idler_diameter_mm, const OpticalGeometry& geometry);

/// Area shared by two disks of the given radii whose centres are
/// `separation` apart.
double disk_overlap_area(double radius_a, double radius_b, double separation);

/// Splits the detected modes into matched pairs and per-arm unmatched modes
/// by mapping the idler aperture into signal space and intersecting it with
/// the signal aperture.
ModePartition mode_partition(const OpticalGeometry& geometry);

/// Mean photon number per mode for parametric gain `gain`: sinh^2(gain).
double gain_to_mean_photons(double gain);

}  // namespace twinbeam
