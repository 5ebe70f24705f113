// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/gainfit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "twinbeam/error.hpp"

namespace twinbeam {
namespace {

double point_weight(const PowerPoint& p, FitWeighting weighting) {
  return weighting == FitWeighting::inverse_photons ? p.weight / p.mean_photons : p.weight;
}

void validate_points(std::span<const PowerPoint> points, std::int64_t modes, double background_slope,
                     FitWeighting weighting) {
  if (points.size() < 3) throw ConfigError("points", "at least 3 points are required");
  if (modes < 1) throw ConfigError("modes", "must be >= 1");
  if (!(background_slope >= 0.0) || !std::isfinite(background_slope)) {
    throw ConfigError("background_slope", "must be finite and non-negative");
  }
  std::set<double> powers;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PowerPoint& p = points[i];
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!(p.pump_power > 0.0) || !std::isfinite(p.pump_power)) {
      throw ConfigError(where + ".power", "must be finite and positive");
    }
    if (!(p.mean_photons >= 0.0) || !std::isfinite(p.mean_photons)) {
      throw ConfigError(where + ".photons", "must be finite and non-negative");
    }
    if (weighting == FitWeighting::inverse_photons && p.mean_photons == 0.0) {
      throw ConfigError(where + ".photons", "inverse-photon weighting needs positive photon numbers");
    }
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
      throw ConfigError(where + ".weight", "must be finite and positive");
    }
    powers.insert(p.pump_power);
  }
  if (powers.size() < 2) throw ConfigError("points", "degenerate data: fewer than two distinct pump powers");
}

}  // namespace

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double relative_tolerance, double absolute_floor, int* evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  int calls = 0;
  auto eval = [&](double x) {
    ++calls;
    return f(x);
  };

  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int iter = 0; iter < 500; ++iter) {
    const double scale = 0.5 * (std::abs(lo) + std::abs(hi));
    if (hi - lo <= std::max(relative_tolerance * scale, absolute_floor)) break;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    }
  }
  if (evaluations != nullptr) *evaluations += calls;
  return 0.5 * (lo + hi);
}

double gain_curve_residual_norm(std::span<const PowerPoint> points, std::int64_t modes,
                                double background_slope, double gain_coefficient, FitWeighting weighting) {
  double sum = 0.0;
  for (const PowerPoint& p : points) {
    const double s = std::sinh(gain_coefficient * std::sqrt(p.pump_power));
    const double r = p.mean_photons - static_cast<double>(modes) * s * s - background_slope * p.pump_power;
    sum += point_weight(p, weighting) * r * r;
  }
  return std::sqrt(sum);
}

GainFit fit_gain_curve(std::span<const PowerPoint> points, std::int64_t modes, double background_slope,
                       const GainFitOptions& options) {
  validate_points(points, modes, background_slope, options.weighting);
  if (options.grid_points < 3 || !(options.min_gain > 0.0) || !(options.max_gain > options.min_gain)) {
    throw ConfigError("options", "grid needs >= 3 points over a positive, increasing gain range");
  }

  // Work in the gain at the largest power, g = c sqrt(P_max), so the search
  // is independent of the pump-power unit.
  double max_power = 0.0;
  for (const PowerPoint& p : points) max_power = std::max(max_power, p.pump_power);
  std::vector<double> relative_root(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) relative_root[i] = std::sqrt(points[i].pump_power / max_power);

  const double m = static_cast<double>(modes);
  auto objective = [&](double g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double s = std::sinh(g * relative_root[i]);
      const double r = points[i].mean_photons - m * s * s - background_slope * points[i].pump_power;
      sum += point_weight(points[i], options.weighting) * r * r;
    }
    return sum;
  };

  GainFit fit;
  const int n_grid = options.grid_points;
  const double log_lo = std::log(options.min_gain);
  const double log_step = (std::log(options.max_gain) - log_lo) / (n_grid - 1);
  std::vector<double> grid(static_cast<std::size_t>(n_grid));
  int best = 0;
  double best_value = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(log_lo + log_step * i);
    const double value = objective(grid[static_cast<std::size_t>(i)]);
    ++fit.evaluations;
    if (i == 0 || value < best_value) {
      best = i;
      best_value = value;
    }
  }
  if (best == n_grid - 1) {
    throw ComputationError("fit_gain_curve: no bracketing minimum; best gain lies at the grid maximum");
  }

  double g_best = 0.0;
  if (best == 0) {
    // Objective still falling towards c = 0: data are background-dominated.
    fit.at_lower_boundary = true;
    g_best = golden_section_minimize(objective, 0.0, grid[1], options.relative_tolerance,
                                     options.min_gain * options.relative_tolerance, &fit.evaluations);
  } else {
    g_best = golden_section_minimize(objective, grid[static_cast<std::size_t>(best - 1)],
                                     grid[static_cast<std::size_t>(best + 1)], options.relative_tolerance, 0.0,
                                     &fit.evaluations);
  }
  if (fit.at_lower_boundary && g_best > grid[0]) fit.at_lower_boundary = false;

  fit.gain_coefficient = g_best / std::sqrt(max_power);
  fit.residual_norm = std::sqrt(objective(g_best));
  ++fit.evaluations;
  fit.gains.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) fit.gains[i] = g_best * relative_root[i];
  return fit;
}

}  // namespace twinbeam
