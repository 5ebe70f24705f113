// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "twinbeam/error.hpp"

namespace twinbeam {
namespace {

using nlohmann::json;

// Reads keys from one JSON object, tracking which were consumed so that
// misspelled or unit-less keys are reported instead of silently ignored.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a JSON object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return object_.contains(key) && !object_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return object_.at(key);
  }

  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key), "missing required field");
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    seen_.insert(key);
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key), "missing required field");
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    seen_.insert(key);
    return has(key) ? integer(key) : fallback;
  }

  void reject_unknown() const {
    for (const auto& item : object_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError(field(item.key()), "unknown field");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

WavelengthBand read_band(ObjectReader& r, const std::string& arm) {
  const std::string min_key = arm + "_wavelength_min_nm";
  const std::string max_key = arm + "_wavelength_max_nm";
  const std::string central_key = arm + "_central_wavelength_nm";
  if (r.has(min_key) || r.has(max_key)) {
    if (r.has(central_key)) throw ConfigError(r.field(central_key), "give either min/max or a central wavelength");
    return {r.number(min_key), r.number(max_key)};
  }
  return WavelengthBand::centered(r.number(central_key), r.number_or("bandwidth_nm", kDefaultBandwidthNm));
}

OpticalGeometry read_geometry(const json& j) {
  ObjectReader r(j, "geometry");
  OpticalGeometry g;
  g.idler_aperture_mm = r.number("idler_aperture_diameter_mm");
  g.idler_displacement_mm = r.number_or("idler_displacement_mm", 0.0);
  g.coherence_length_mm = r.number("transverse_coherence_length_mm");
  g.pulse_duration_ps = r.number("pulse_duration_ps");
  g.coherence_time_ps = r.number("coherence_time_ps");
  g.signal_band = read_band(r, "signal");
  g.idler_band = read_band(r, "idler");
  // Absent signal diameter means "matched to the idler aperture".
  g.signal_aperture_mm = r.has("signal_aperture_diameter_mm")
                             ? r.number("signal_aperture_diameter_mm")
                             : matched_signal_diameter(g.idler_aperture_mm, g);
  r.reject_unknown();
  g.validate();
  return g;
}

DetectionChannel read_channel(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DetectionChannel c;
  c.efficiency = r.number_or("efficiency", 1.0);
  c.electronic_noise_rms = r.number_or("sigma_e_electrons", 0.0);
  r.reject_unknown();
  return c;
}

}  // namespace

void refresh_partition(ExperimentSetup& setup) {
  if (setup.geometry) setup.config.partition = mode_partition(*setup.geometry);
}

ExperimentSetup parse_setup(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }

  ObjectReader r(doc, "");
  ExperimentSetup setup;
  ExperimentConfig& c = setup.config;

  const bool has_geometry = r.has("geometry");
  const bool has_modes = r.has("modes");
  if (has_geometry == has_modes) throw ConfigError("modes", "give exactly one of 'geometry' or 'modes'");
  if (has_geometry) {
    setup.geometry = read_geometry(r.raw("geometry"));
    refresh_partition(setup);
  } else {
    ObjectReader m(r.raw("modes"), "modes");
    c.partition.matched_pairs = m.integer("matched_pairs");
    c.partition.unmatched_signal = m.integer_or("unmatched_signal", 0);
    c.partition.unmatched_idler = m.integer_or("unmatched_idler", 0);
    m.reject_unknown();
  }

  if (r.has("gain") == r.has("mean_photons_per_mode")) {
    throw ConfigError("mean_photons_per_mode", "give exactly one of 'gain' or 'mean_photons_per_mode'");
  }
  if (r.has("gain")) {
    const double gain = r.number("gain");
    if (!(gain >= 0.0)) throw ConfigError("gain", "must be non-negative");
    c.mean_photons_per_mode = gain_to_mean_photons(gain);
  } else {
    c.mean_photons_per_mode = r.number("mean_photons_per_mode");
  }

  c.signal_channel = r.has("signal_channel") ? read_channel(r.raw("signal_channel"), "signal_channel")
                                             : DetectionChannel{};
  c.idler_channel = r.has("idler_channel") ? read_channel(r.raw("idler_channel"), "idler_channel")
                                           : DetectionChannel{};
  c.background_signal = r.number_or("background_signal_photons", 0.0);
  c.background_idler = r.number_or("background_idler_photons", 0.0);
  r.reject_unknown();
  c.validate();
  return setup;
}

ExperimentSetup load_setup(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_setup(buffer.str());
}

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  return fmt::format("{}", value);
}

std::string report_to_json(const NrfReport& report, const std::optional<ModePartition>& partition) {
  json j;
  j["nrf"] = report.nrf;
  j["nrf_db"] = report.nrf > 0.0 ? json(-10.0 * std::log10(report.nrf)) : json(nullptr);
  j["mean_n1"] = report.mean_n1;
  j["mean_n2"] = report.mean_n2;
  j["contributions"] = {{"loss", report.contributions.loss},
                        {"mismatch", report.contributions.mismatch},
                        {"background", report.contributions.background},
                        {"efficiency_imbalance", report.contributions.efficiency_imbalance}};
  if (report.ci) {
    j["ci"] = {{"low", report.ci->low}, {"high", report.ci->high}, {"level", report.ci->level}};
    j["standard_error"] = report.standard_error;
  }
  j["low_signal"] = report.low_signal;
  if (partition) {
    j["modes"] = {{"matched_pairs", partition->matched_pairs},
                  {"unmatched_signal", partition->unmatched_signal},
                  {"unmatched_idler", partition->unmatched_idler}};
  }
  return j.dump(2);
}

void write_records_csv(const SampleSet& samples, std::ostream& out) {
  out << "pulse,counts1,counts2,n1,n2\n";
  std::size_t index = 0;
  for (const PulseRecord& r : samples.records) {
    out << fmt::format("{},{},{},{},{}\n", index++, r.counts1, r.counts2, r.n1, r.n2);
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1));
  }
  return cells;
}

double parse_cell(const std::string& cell, const std::string& field) {
  try {
    std::size_t used = 0;
    const double value = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(field, "not a number: '" + cell + "'");
  }
}

}  // namespace

std::vector<PowerPoint> read_power_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("points", "empty file");
  const auto header = split_csv_line(line);
  const bool weighted = header.size() == 3 && header[2] == "weight";
  if (header.size() < 2 || header[0] != "power" || header[1] != "photons" || (header.size() == 3 && !weighted) ||
      header.size() > 3) {
    throw ConfigError("points", "header must be 'power,photons' or 'power,photons,weight'");
  }

  std::vector<PowerPoint> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    const std::string where = "points line " + std::to_string(line_no);
    if (cells.size() != header.size()) throw ConfigError(where, "wrong number of columns");
    PowerPoint p;
    p.pump_power = parse_cell(cells[0], where + " power");
    p.mean_photons = parse_cell(cells[1], where + " photons");
    if (weighted) p.weight = parse_cell(cells[2], where + " weight");
    points.push_back(p);
  }
  return points;
}

std::string fit_to_json(const GainFit& fit, std::span<const PowerPoint> points) {
  json j;
  j["gain_coefficient"] = fit.gain_coefficient;
  j["residual_norm"] = fit.residual_norm;
  j["at_lower_boundary"] = fit.at_lower_boundary;
  json rows = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back({{"power", points[i].pump_power},
                    {"gain", fit.gains[i]},
                    {"mean_photons_per_mode", gain_to_mean_photons(fit.gains[i])}});
  }
  j["points"] = rows;
  return j.dump(2);
}

}  // namespace twinbeam
