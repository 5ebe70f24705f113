// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "twinbeam/model.hpp"

namespace twinbeam {

/// Normalised second-order correlations of the two beams.
struct CorrelationTriple {
  double g11 = 1.0;
  double g22 = 1.0;
  double g12 = 1.0;
};

/// Additive split of the NRF. Each term is a share of Var(N1 - N2) divided by
/// the total mean, so the four terms sum to the NRF.
struct NrfContributions {
  double loss = 0.0;                  // binomial partition noise from eta < 1
  double mismatch = 0.0;              // unmatched modes (Delta when lossless)
  double background = 0.0;            // Poissonian background excess
  double efficiency_imbalance = 0.0;  // (eta1 - eta2)^2 on the shared modes

  double sum() const { return loss + mismatch + background + efficiency_imbalance; }
};

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  double level = 0.95;
};

struct NrfReport {
  double nrf = 0.0;
  NrfContributions contributions;
  double mean_n1 = 0.0;
  double mean_n2 = 0.0;
  std::optional<ConfidenceInterval> ci;  // estimator only
  double standard_error = 0.0;           // bootstrap standard deviation, estimator only
  bool low_signal = false;               // noise-subtracted numerator went negative
};

/// First and second moments of the detected photoelectron counts.
struct PhotocountMoments {
  double mean1 = 0.0;
  double mean2 = 0.0;
  double var1 = 0.0;
  double var2 = 0.0;
  double cov = 0.0;
  double var_diff = 0.0;
};

enum class Classicality { classical_compatible, nonclassical };

/// Var(N1 - N2) for two beams with equal means:
/// N^2 (g11 + g22 - 2 g12) + 2N.
double variance_difference(double mean_photons, const CorrelationTriple& g);

/// Unequal-means form of the same identity.
double variance_difference(double mean1, double mean2, const CorrelationTriple& g);

/// var / (mean1 + mean2). Throws ComputationError when the total mean is zero.
double nrf_from_variance(double variance, double mean1, double mean2);

/// NRF penalty from k unmatched modes next to m matched pairs:
/// k (N + 1) / (m + k).
double delta_unmatched(std::int64_t matched, std::int64_t unmatched, double mean_photons_per_mode);

/// Correlations of a single two-mode squeezed vacuum with N photons per beam.
CorrelationTriple two_mode_vacuum_correlations(double mean_photons);

/// Correlations of `matched` identical two-mode squeezed vacua summed into each
/// beam, with N photons per mode.
CorrelationTriple multimode_vacuum_correlations(std::int64_t matched, double mean_photons_per_mode);

/// Closed-form detected moments after binomial thinning of every source.
PhotocountMoments predicted_moments(const ExperimentConfig& config);

/// Closed-form NRF with its decomposition.
NrfReport nrf_predict(const ExperimentConfig& config);

/// Cauchy-Schwarz test: nonclassical iff g11 + g22 - 2 g12 < 0.
Classicality classicality_witness(const CorrelationTriple& g);

/// Largest probability mass the brute-force oracle may discard.
inline constexpr double kOracleTailTolerance = 1e-12;

/// Brute-force moments: sums each source's truncated photon-number
/// distribution against explicit binomial detection tables and composes the
/// independent sources by adding cumulants. Throws ComputationError when the
/// discarded tail exceeds kOracleTailTolerance.
PhotocountMoments enumerate_moments(const ExperimentConfig& config, int truncation);

}  // namespace twinbeam
