// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twinbeam/analytic.hpp"
#include "twinbeam/gainfit.hpp"
#include "twinbeam/model.hpp"
#include "twinbeam/sampler.hpp"

namespace twinbeam {

/// A parsed experiment file. When a geometry block is present the mode
/// partition in `config` was derived from it.
struct ExperimentSetup {
  std::optional<OpticalGeometry> geometry;
  ExperimentConfig config;
};

/// Parses the JSON experiment format. Field names carry their units
/// (diameter_mm, sigma_e_electrons, ...). Unknown keys are rejected. Throws
/// ConfigError naming the offending field.
ExperimentSetup parse_setup(std::string_view json_text);
ExperimentSetup load_setup(const std::filesystem::path& path);

/// Recomputes the partition of `setup.config` from `setup.geometry`, if any.
void refresh_partition(ExperimentSetup& setup);

std::string report_to_json(const NrfReport& report, const std::optional<ModePartition>& partition = {});

/// Per-pulse CSV: pulse,counts1,counts2,n1,n2.
void write_records_csv(const SampleSet& samples, std::ostream& out);

/// Reads the fit input: CSV with header "power,photons" and an optional
/// third "weight" column.
std::vector<PowerPoint> read_power_points_csv(std::istream& in);

std::string fit_to_json(const GainFit& fit, std::span<const PowerPoint> points);

/// Shortest round-trip-stable text for a double; empty for NaN.
std::string format_number(double value);

}  // namespace twinbeam
