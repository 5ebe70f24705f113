// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "twinbeam/error.hpp"

namespace twinbeam {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(field, "must be finite and strictly positive, got " + std::to_string(value));
  }
}

void require_nonnegative(double value, const char* field) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(field, "must be finite and non-negative, got " + std::to_string(value));
  }
}

void validate_band(const WavelengthBand& band, const char* min_field, const char* max_field) {
  require_positive(band.min_nm, min_field);
  require_positive(band.max_nm, max_field);
  if (band.min_nm > band.max_nm) {
    throw ConfigError(min_field, "exceeds the band maximum");
  }
}

double disk_area(double radius) { return std::numbers::pi * radius * radius; }

std::int64_t round_count(double x) { return static_cast<std::int64_t>(std::llround(x)); }

}  // namespace

void OpticalGeometry::validate() const {
  require_positive(signal_aperture_mm, "geometry.signal_aperture_diameter_mm");
  require_positive(idler_aperture_mm, "geometry.idler_aperture_diameter_mm");
  if (!std::isfinite(idler_displacement_mm)) {
    throw ConfigError("geometry.idler_displacement_mm", "must be finite");
  }
  require_positive(coherence_length_mm, "geometry.transverse_coherence_length_mm");
  require_positive(pulse_duration_ps, "geometry.pulse_duration_ps");
  require_positive(coherence_time_ps, "geometry.coherence_time_ps");
  validate_band(signal_band, "geometry.signal_wavelength_min_nm", "geometry.signal_wavelength_max_nm");
  validate_band(idler_band, "geometry.idler_wavelength_min_nm", "geometry.idler_wavelength_max_nm");
  if (!(signal_band.max_nm < idler_band.min_nm)) {
    throw ConfigError("geometry.signal_wavelength_max_nm",
                      "signal band must lie strictly below the idler band");
  }
}

void ModePartition::validate() const {
  if (matched_pairs < 0) throw ConfigError("modes.matched_pairs", "must be >= 0");
  if (unmatched_signal < 0) throw ConfigError("modes.unmatched_signal", "must be >= 0");
  if (unmatched_idler < 0) throw ConfigError("modes.unmatched_idler", "must be >= 0");
  if (matched_pairs + std::max(unmatched_signal, unmatched_idler) < 1) {
    throw ConfigError("modes", "at least one mode is required");
  }
}

double GainModel::gain(double pump_power) const {
  return gain_coefficient * std::sqrt(pump_power);
}

double GainModel::mean_photons_per_mode(double pump_power) const {
  return gain_to_mean_photons(gain(pump_power));
}

double GainModel::background(double pump_power) const { return background_slope * pump_power; }

double GainModel::total_photons(double pump_power, std::int64_t modes) const {
  return static_cast<double>(modes) * mean_photons_per_mode(pump_power) + background(pump_power);
}

void GainModel::validate() const {
  require_nonnegative(gain_coefficient, "gain.gain_coefficient");
  require_nonnegative(background_slope, "gain.background_slope");
}

void DetectionChannel::validate(const char* field) const {
  const std::string prefix(field);
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ConfigError(prefix + ".efficiency", "must lie in [0, 1], got " + std::to_string(efficiency));
  }
  if (!(electronic_noise_rms >= 0.0) || !std::isfinite(electronic_noise_rms)) {
    throw ConfigError(prefix + ".sigma_e_electrons", "must be finite and non-negative");
  }
}

void ExperimentConfig::validate() const {
  partition.validate();
  require_nonnegative(mean_photons_per_mode, "mean_photons_per_mode");
  signal_channel.validate("signal_channel");
  idler_channel.validate("idler_channel");
  require_nonnegative(background_signal, "background_signal_photons");
  require_nonnegative(background_idler, "background_idler_photons");
  if (!std::isfinite(mean_detected_signal()) || !std::isfinite(mean_detected_idler())) {
    throw ConfigError("mean_photons_per_mode", "detected photon numbers overflow");
  }
}

double ExperimentConfig::mean_detected_signal() const {
  return signal_channel.efficiency *
         (static_cast<double>(partition.signal_modes()) * mean_photons_per_mode + background_signal);
}

double ExperimentConfig::mean_detected_idler() const {
  return idler_channel.efficiency *
         (static_cast<double>(partition.idler_modes()) * mean_photons_per_mode + background_idler);
}

ModeCounts mode_counts(const OpticalGeometry& geometry) {
  require_positive(geometry.signal_aperture_mm, "geometry.signal_aperture_diameter_mm");
  require_positive(geometry.coherence_length_mm, "geometry.transverse_coherence_length_mm");
  require_positive(geometry.pulse_duration_ps, "geometry.pulse_duration_ps");
  require_positive(geometry.coherence_time_ps, "geometry.coherence_time_ps");

  const double ratio = geometry.signal_aperture_mm / geometry.coherence_length_mm;
  ModeCounts counts;
  counts.transverse = std::max<std::int64_t>(1, round_count(ratio * ratio));
  counts.longitudinal =
      std::max<std::int64_t>(1, round_count(geometry.pulse_duration_ps / geometry.coherence_time_ps));
  counts.total = counts.transverse * counts.longitudinal;
  return counts;
}

double matched_signal_diameter(double idler_diameter_mm, const OpticalGeometry& geometry) {
  require_positive(idler_diameter_mm, "geometry.idler_aperture_diameter_mm");
  require_positive(geometry.signal_band.min_nm, "geometry.signal_wavelength_min_nm");
  require_positive(geometry.idler_band.max_nm, "geometry.idler_wavelength_max_nm");
  return idler_diameter_mm * geometry.signal_band.min_nm / geometry.idler_band.max_nm;
}

double disk_overlap_area(double radius_a, double radius_b, double separation) {
  const double d = std::abs(separation);
  const double r_small = std::min(radius_a, radius_b);
  const double r_large = std::max(radius_a, radius_b);
  if (r_small <= 0.0 || d >= r_small + r_large) return 0.0;
  if (d <= r_large - r_small) return disk_area(r_small);

  // Lens: sum of the two circular segments cut by the radical line.
  const double a2 = radius_a * radius_a;
  const double b2 = radius_b * radius_b;
  const double cos_a = std::clamp((d * d + a2 - b2) / (2.0 * d * radius_a), -1.0, 1.0);
  const double cos_b = std::clamp((d * d + b2 - a2) / (2.0 * d * radius_b), -1.0, 1.0);
  const double kite = 0.5 * std::sqrt(std::max(
      0.0, (-d + radius_a + radius_b) * (d + radius_a - radius_b) * (d - radius_a + radius_b) *
               (d + radius_a + radius_b)));
  return a2 * std::acos(cos_a) + b2 * std::acos(cos_b) - kite;
}

ModePartition mode_partition(const OpticalGeometry& geometry) {
  geometry.validate();
  const ModeCounts counts = mode_counts(geometry);

  // Idler aperture expressed in signal-space coordinates.
  const double scale = geometry.signal_band.min_nm / geometry.idler_band.max_nm;
  const double r_signal = 0.5 * geometry.signal_aperture_mm;
  const double r_idler = 0.5 * geometry.idler_aperture_mm * scale;
  const double shift = std::abs(geometry.idler_displacement_mm) * scale;

  const double area_signal = disk_area(r_signal);
  const double area_idler = disk_area(r_idler);
  const double area_overlap = std::min(disk_overlap_area(r_signal, r_idler, shift),
                                       std::min(area_signal, area_idler));

  // Cell area calibrated so the signal aperture holds exactly counts.transverse
  // cells; this keeps the partition consistent with mode_counts.
  const double cell_area = area_signal / static_cast<double>(counts.transverse);
  const double per_cell = static_cast<double>(counts.longitudinal) / cell_area;

  ModePartition partition;
  partition.matched_pairs = round_count(per_cell * area_overlap);
  partition.unmatched_signal = std::max<std::int64_t>(0, round_count(per_cell * (area_signal - area_overlap)));
  partition.unmatched_idler = std::max<std::int64_t>(0, round_count(per_cell * (area_idler - area_overlap)));
  return partition;
}

double gain_to_mean_photons(double gain) {
  if (!(gain >= 0.0)) throw ConfigError("gain", "parametric gain must be non-negative");
  const double s = std::sinh(gain);
  return s * s;
}

}  // namespace twinbeam
