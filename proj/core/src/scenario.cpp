// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "twinbeam/error.hpp"
#include "twinbeam/estimator.hpp"

namespace twinbeam {
namespace {

constexpr std::array<std::pair<ScenarioKind, std::string_view>, 5> kKindNames{{
    {ScenarioKind::aperture_sweep_both, "aperture_sweep_both"},
    {ScenarioKind::aperture_sweep_signal, "aperture_sweep_signal"},
    {ScenarioKind::gain_sweep, "gain_sweep"},
    {ScenarioKind::displacement_sweep, "displacement_sweep"},
    {ScenarioKind::nrf_vs_mean_photons, "nrf_vs_mean_photons"},
}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool needs_geometry(ScenarioKind kind) {
  return kind == ScenarioKind::aperture_sweep_both || kind == ScenarioKind::aperture_sweep_signal ||
         kind == ScenarioKind::displacement_sweep;
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch == '\n' ? ' ' : ch;
  }
  return quoted + "\"";
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError("kind", "unknown scenario kind '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
  if (grid.empty()) throw ConfigError("grid", "must contain at least one value");
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError("grid", "values must be finite");
  }
  if (needs_geometry(kind) && !base.geometry) {
    throw ConfigError("base.geometry", std::string(to_string(kind)) + " needs an optical geometry");
  }
  if (pulses < 0) throw ConfigError("pulses", "must be >= 0");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (bootstrap_resamples < 0) throw ConfigError("bootstrap_resamples", "must be >= 0");
}

ExperimentSetup scenario_point(const ScenarioSpec& spec, double x) {
  ExperimentSetup point = spec.base;
  switch (spec.kind) {
    case ScenarioKind::aperture_sweep_both:
      point.geometry->idler_aperture_mm = x;
      point.geometry->signal_aperture_mm = matched_signal_diameter(x, *point.geometry);
      refresh_partition(point);
      break;
    case ScenarioKind::aperture_sweep_signal:
      point.geometry->signal_aperture_mm = x;
      refresh_partition(point);
      break;
    case ScenarioKind::displacement_sweep:
      point.geometry->idler_displacement_mm = x;
      refresh_partition(point);
      break;
    case ScenarioKind::gain_sweep:
      point.config.mean_photons_per_mode = gain_to_mean_photons(x);
      break;
    case ScenarioKind::nrf_vs_mean_photons:
      point.config.mean_photons_per_mode = x;
      break;
  }
  point.config.validate();
  return point;
}

std::vector<ScenarioRow> run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<ScenarioRow> rows;
  rows.reserve(spec.grid.size());
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    ScenarioRow row;
    row.grid_value = spec.grid[i];
    row.nrf_analytic = row.nrf_mc = row.nrf_ci_lo = row.nrf_ci_hi = row.nrf_mc_se = kNaN;
    row.mean_n1 = row.mean_n2 = row.g11 = row.g22 = row.g12 = kNaN;
    try {
      const ExperimentSetup point = scenario_point(spec, spec.grid[i]);
      row.partition = point.config.partition;
      const NrfReport predicted = nrf_predict(point.config);
      row.nrf_analytic = predicted.nrf;
      row.mean_n1 = predicted.mean_n1;
      row.mean_n2 = predicted.mean_n2;

      if (spec.pulses > 0) {
        const std::uint64_t point_seed = mix64(spec.seed ^ mix64(static_cast<std::uint64_t>(i) + 1));
        const SampleSet samples = simulate(point.config, spec.pulses, point_seed, spec.workers);
        NrfEstimateOptions options;
        options.subtract_noise = spec.subtract_noise;
        options.bootstrap_resamples = spec.bootstrap_resamples;
        options.workers = spec.workers;
        const NrfReport measured = nrf_estimate(samples, options);
        row.nrf_mc = measured.nrf;
        row.mean_n1 = measured.mean_n1;
        row.mean_n2 = measured.mean_n2;
        if (measured.ci) {
          row.nrf_ci_lo = measured.ci->low;
          row.nrf_ci_hi = measured.ci->high;
          row.nrf_mc_se = measured.standard_error;
        }
        const CorrelationTriple g = g2_estimates(samples);
        row.g11 = g.g11;
        row.g22 = g.g22;
        row.g12 = g.g12;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_scenario_csv(const std::vector<ScenarioRow>& rows, std::ostream& out) {
  out << "grid_value,nrf_analytic,nrf_mc,nrf_ci_lo,nrf_ci_hi,mean_n1,mean_n2,g11,g22,g12,m,k_s,k_i,error,nrf_db\n";
  for (const ScenarioRow& r : rows) {
    // Squeezing in dB of the measured NRF, or of the prediction in closed-form-only runs.
    const double nrf = std::isnan(r.nrf_mc) ? r.nrf_analytic : r.nrf_mc;
    const double db = nrf > 0.0 ? -10.0 * std::log10(nrf) : kNaN;
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", format_number(r.grid_value),
                       format_number(r.nrf_analytic), format_number(r.nrf_mc), format_number(r.nrf_ci_lo),
                       format_number(r.nrf_ci_hi), format_number(r.mean_n1), format_number(r.mean_n2),
                       format_number(r.g11), format_number(r.g22), format_number(r.g12), r.partition.matched_pairs,
                       r.partition.unmatched_signal, r.partition.unmatched_idler, csv_escape(r.error),
                       format_number(db));
  }
}

ScenarioSpec parse_scenario(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");

  static const std::array<std::string_view, 8> known{"kind",    "base",    "grid",           "pulses",
                                                     "seed",    "workers", "subtract_noise", "bootstrap_resamples"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError(item.key(), "unknown field");
    }
  }

  ScenarioSpec spec;
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw ConfigError("kind", "missing or not a string");
  spec.kind = scenario_kind_from_string(doc["kind"].get<std::string>());

  if (!doc.contains("base")) throw ConfigError("base", "missing required field");
  try {
    spec.base = parse_setup(doc["base"].dump());
  } catch (const ConfigError& e) {
    throw ConfigError("base." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
  }

  if (!doc.contains("grid") || !doc["grid"].is_array()) throw ConfigError("grid", "missing or not an array");
  for (const json& v : doc["grid"]) {
    if (!v.is_number()) throw ConfigError("grid", "values must be numbers");
    spec.grid.push_back(v.get<double>());
  }
  auto read_int = [&](const char* key, auto& target) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) throw ConfigError(key, "expected an integer");
    target = doc[key].get<std::remove_reference_t<decltype(target)>>();
  };
  read_int("pulses", spec.pulses);
  read_int("seed", spec.seed);
  read_int("workers", spec.workers);
  read_int("bootstrap_resamples", spec.bootstrap_resamples);
  if (doc.contains("subtract_noise")) {
    if (!doc["subtract_noise"].is_boolean()) throw ConfigError("subtract_noise", "expected true or false");
    spec.subtract_noise = doc["subtract_noise"].get<bool>();
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace twinbeam
