// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace twinbeam {

/// One calibration measurement: detected photons per pulse at a pump power.
struct PowerPoint {
  double pump_power = 0.0;
  double mean_photons = 0.0;
  double weight = 1.0;
};

enum class FitWeighting { uniform, inverse_photons };

struct GainFitOptions {
  FitWeighting weighting = FitWeighting::uniform;
  int grid_points = 200;
  /// Gain range at the largest pump power covered by the coarse grid.
  double min_gain = 1e-3;
  double max_gain = 10.0;
  double relative_tolerance = 1e-8;
};

struct GainFit {
  double gain_coefficient = 0.0;   // c in Gamma = c sqrt(P)
  double residual_norm = 0.0;      // sqrt(sum w (N - model)^2) at the optimum
  std::vector<double> gains;       // Gamma at each input point
  bool at_lower_boundary = false;  // optimum at c -> 0: data look like pure background
  int evaluations = 0;
};

/// Minimises a scalar function on [lo, hi] by golden-section search until
/// the bracket is narrower than `relative_tolerance` times its midpoint (or
/// `absolute_floor`). Returns the bracket midpoint.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double relative_tolerance, double absolute_floor = 0.0,
                               int* evaluations = nullptr);

/// Weighted residual norm of the gain law N = m sinh^2(c sqrt(P)) + b P.
double gain_curve_residual_norm(std::span<const PowerPoint> points, std::int64_t modes,
                                double background_slope, double gain_coefficient,
                                FitWeighting weighting = FitWeighting::uniform);

/// Fits c with m and b held fixed: coarse log grid over c, then golden-section
/// refinement inside the bracket around the best grid point.
/// Throws ConfigError for invalid or degenerate data and ComputationError
/// when the best grid point sits at the upper end (no bracket).
GainFit fit_gain_curve(std::span<const PowerPoint> points, std::int64_t modes, double background_slope,
                       const GainFitOptions& options = {});

}  // namespace twinbeam
