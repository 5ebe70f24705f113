// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "twinbeam/io.hpp"

namespace twinbeam {

/// Swept parameter of a scenario. The grid value means, per kind:
///   aperture_sweep_both    idler aperture diameter (mm); signal kept matched
///   aperture_sweep_signal  signal aperture diameter (mm); idler fixed
///   gain_sweep             parametric gain Gamma
///   displacement_sweep     idler aperture displacement (mm)
///   nrf_vs_mean_photons    mean photons per mode
enum class ScenarioKind {
  aperture_sweep_both,
  aperture_sweep_signal,
  gain_sweep,
  displacement_sweep,
  nrf_vs_mean_photons,
};

std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view name);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::nrf_vs_mean_photons;
  ExperimentSetup base;
  std::vector<double> grid;
  std::int64_t pulses = 100000;  // 0 skips the Monte Carlo columns
  std::uint64_t seed = 1;
  int workers = 1;
  bool subtract_noise = true;
  int bootstrap_resamples = 1000;

  void validate() const;
};

/// One grid point. Monte Carlo fields are NaN when not computed.
struct ScenarioRow {
  double grid_value = 0.0;
  double nrf_analytic = 0.0;
  double nrf_mc = 0.0;
  double nrf_ci_lo = 0.0;
  double nrf_ci_hi = 0.0;
  double nrf_mc_se = 0.0;
  double mean_n1 = 0.0;
  double mean_n2 = 0.0;
  double g11 = 0.0;
  double g22 = 0.0;
  double g12 = 0.0;
  ModePartition partition;
  std::string error;
};

/// Experiment at one grid point of `spec`.
ExperimentSetup scenario_point(const ScenarioSpec& spec, double grid_value);

/// Evaluates every grid point in order. A failing point keeps its row with
/// the message in `error`; the remaining points still run.
std::vector<ScenarioRow> run_scenario(const ScenarioSpec& spec);

/// Columns: grid_value, nrf_analytic, nrf_mc, nrf_ci_lo, nrf_ci_hi, mean_n1,
/// mean_n2, g11, g22, g12, m, k_s, k_i, error, nrf_db. nrf_db is -10 log10 of
/// nrf_mc, or of nrf_analytic when no Monte Carlo was run; blank for NRF <= 0.
void write_scenario_csv(const std::vector<ScenarioRow>& rows, std::ostream& out);

ScenarioSpec parse_scenario(std::string_view json_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

}  // namespace twinbeam
