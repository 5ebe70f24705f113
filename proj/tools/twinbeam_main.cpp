// SPDX-License-Identifier: Apache-2.0
// twinbeam: predict, simulate, fit and sweep twin-beam noise reduction.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "twinbeam/analytic.hpp"
#include "twinbeam/error.hpp"
#include "twinbeam/estimator.hpp"
#include "twinbeam/gainfit.hpp"
#include "twinbeam/io.hpp"
#include "twinbeam/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::int64_t> pulses;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool no_noise_subtraction = false;
  bool summary = false;
  std::string points;
  std::int64_t modes = 0;
  double background_slope = 0.0;
  std::string weighting = "uniform";
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw twinbeam::ConfigError("--out", "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void run_predict(const Options& opt) {
  const twinbeam::ExperimentSetup setup = twinbeam::load_setup(opt.config);
  const twinbeam::NrfReport report = twinbeam::nrf_predict(setup.config);
  Output out(opt.out);
  out.stream() << twinbeam::report_to_json(report, setup.config.partition) << '\n';
}

void run_simulate(const Options& opt) {
  const twinbeam::ExperimentSetup setup = twinbeam::load_setup(opt.config);
  const twinbeam::SampleSet samples = twinbeam::simulate(setup.config, opt.pulses.value_or(100000),
                                                         opt.seed.value_or(1), opt.workers.value_or(1));
  Output out(opt.out);
  if (opt.summary) {
    twinbeam::NrfEstimateOptions est;
    est.subtract_noise = !opt.no_noise_subtraction;
    est.workers = opt.workers.value_or(1);
    out.stream() << twinbeam::report_to_json(twinbeam::nrf_estimate(samples, est), setup.config.partition) << '\n';
  } else {
    twinbeam::write_records_csv(samples, out.stream());
  }
}

void run_fit(const Options& opt) {
  std::ifstream in(opt.points);
  if (!in) throw twinbeam::ConfigError("--points", "cannot open " + opt.points);
  const auto points = twinbeam::read_power_points_csv(in);
  twinbeam::GainFitOptions fit_options;
  fit_options.weighting = opt.weighting == "inverse_photons" ? twinbeam::FitWeighting::inverse_photons
                                                              : twinbeam::FitWeighting::uniform;
  const twinbeam::GainFit fit = twinbeam::fit_gain_curve(points, opt.modes, opt.background_slope, fit_options);
  if (fit.at_lower_boundary) {
    std::cerr << "warning: best fit at gain coefficient -> 0; data look like pure background\n";
  }
  Output out(opt.out);
  out.stream() << twinbeam::fit_to_json(fit, points) << '\n';
}

void run_scenario_command(const Options& opt) {
  twinbeam::ScenarioSpec spec = twinbeam::load_scenario(opt.config);
  if (opt.pulses) spec.pulses = *opt.pulses;
  if (opt.seed) spec.seed = *opt.seed;
  if (opt.workers) spec.workers = *opt.workers;
  if (opt.no_noise_subtraction) spec.subtract_noise = false;
  spec.validate();
  const auto rows = twinbeam::run_scenario(spec);
  Output out(opt.out);
  twinbeam::write_scenario_csv(rows, out.stream());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-beam noise reduction factor: prediction, Monte Carlo and gain calibration"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* config = cmd->add_option("--config", opt.config, "JSON experiment or scenario file");
    if (needs_config) config->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "Output path (default: stdout)");
  };
  auto add_run = [&](CLI::App* cmd, const CLI::Validator& pulses_check) {
    cmd->add_option("--pulses", opt.pulses, "Number of pulses")->check(pulses_check);
    cmd->add_option("--seed", opt.seed, "64-bit seed");
    cmd->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-noise-subtraction", opt.no_noise_subtraction,
                  "Do not subtract the electronic-noise variance");
  };

  auto* predict = app.add_subcommand("predict", "Closed-form NRF and its decomposition (JSON)");
  add_common(predict, true);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo pulses (CSV) or their NRF summary (JSON)");
  add_common(simulate, true);
  add_run(simulate, CLI::PositiveNumber);
  simulate->add_flag("--summary", opt.summary, "Emit the estimated NRF instead of per-pulse records");

  auto* fit = app.add_subcommand("fit", "Fit the gain coefficient to power,photons data (JSON)");
  add_common(fit, false);
  fit->add_option("--points", opt.points, "CSV with header power,photons[,weight]")->required();
  fit->add_option("--modes", opt.modes, "Number of detected modes m")->required()->check(CLI::PositiveNumber);
  fit->add_option("--background-slope", opt.background_slope, "Known background photons per power unit")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--weighting", opt.weighting, "uniform or inverse_photons")
      ->check(CLI::IsMember({"uniform", "inverse_photons"}));

  auto* scenario = app.add_subcommand("scenario", "Sweep a parameter and emit one CSV row per grid point (--pulses 0: closed form only)");
  add_common(scenario, true);
  add_run(scenario, CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*predict) run_predict(opt);
    if (*simulate) run_simulate(opt);
    if (*fit) run_fit(opt);
    if (*scenario) run_scenario_command(opt);
  } catch (const twinbeam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
