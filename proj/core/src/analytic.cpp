// SPDX-License-Identifier: Apache-2.0
#include "twinbeam/analytic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "twinbeam/error.hpp"

namespace twinbeam {

double variance_difference(double mean_photons, const CorrelationTriple& g) {
  const double n = mean_photons;
  return n * n * (g.g11 + g.g22 - 2.0 * g.g12) + 2.0 * n;
}

double variance_difference(double mean1, double mean2, const CorrelationTriple& g) {
  // <Na^2> = g_aa <Na>^2 + <Na>,  <N1 N2> = g12 <N1><N2>
  const double var1 = g.g11 * mean1 * mean1 + mean1 - mean1 * mean1;
  const double var2 = g.g22 * mean2 * mean2 + mean2 - mean2 * mean2;
  const double cov = (g.g12 - 1.0) * mean1 * mean2;
  return var1 + var2 - 2.0 * cov;
}

double nrf_from_variance(double variance, double mean1, double mean2) {
  const double total = mean1 + mean2;
  if (!(total > 0.0)) {
    throw ComputationError("NRF undefined: total mean photon number is zero");
  }
  return variance / total;
}

double delta_unmatched(std::int64_t matched, std::int64_t unmatched, double mean_photons_per_mode) {
  if (matched < 0 || unmatched < 0 || matched + unmatched < 1) {
    throw ComputationError("delta_unmatched requires m + k >= 1 with m, k >= 0");
  }
  return static_cast<double>(unmatched) * (mean_photons_per_mode + 1.0) /
         static_cast<double>(matched + unmatched);
}

CorrelationTriple two_mode_vacuum_correlations(double mean_photons) {
  return {2.0, 2.0, 2.0 + 1.0 / mean_photons};
}

CorrelationTriple multimode_vacuum_correlations(std::int64_t matched, double mean_photons_per_mode) {
  const double m = static_cast<double>(matched);
  return {1.0 + 1.0 / m, 1.0 + 1.0 / m, 1.0 + (mean_photons_per_mode + 1.0) / (m * mean_photons_per_mode)};
}

namespace {

struct PredictedTerms {
  PhotocountMoments moments;
  NrfContributions variance_shares;  // un-normalised, in photoelectrons^2
};

PredictedTerms predict_terms(const ExperimentConfig& config) {
  config.validate();
  const double eta1 = config.signal_channel.efficiency;
  const double eta2 = config.idler_channel.efficiency;
  const double n = config.mean_photons_per_mode;
  const double thermal_var = n * n + n;
  const double m = static_cast<double>(config.partition.matched_pairs);
  const double k1 = static_cast<double>(config.partition.unmatched_signal);
  const double k2 = static_cast<double>(config.partition.unmatched_idler);
  const double b1 = config.background_signal;
  const double b2 = config.background_idler;

  // Pre-loss photon numbers X_a = S + U_a + B_a with S shared between arms.
  const double mean_x1 = (m + k1) * n + b1;
  const double mean_x2 = (m + k2) * n + b2;
  const double var_x1 = (m + k1) * thermal_var + b1;
  const double var_x2 = (m + k2) * thermal_var + b2;
  const double cov_x = m * thermal_var;

  // Binomial thinning: Var(N) = eta^2 Var(X) + eta (1 - eta) <X>.
  PredictedTerms out;
  PhotocountMoments& mo = out.moments;
  mo.mean1 = eta1 * mean_x1;
  mo.mean2 = eta2 * mean_x2;
  mo.var1 = eta1 * eta1 * var_x1 + eta1 * (1.0 - eta1) * mean_x1;
  mo.var2 = eta2 * eta2 * var_x2 + eta2 * (1.0 - eta2) * mean_x2;
  mo.cov = eta1 * eta2 * cov_x;

  NrfContributions& v = out.variance_shares;
  v.loss = eta1 * (1.0 - eta1) * mean_x1 + eta2 * (1.0 - eta2) * mean_x2;
  v.mismatch = (eta1 * eta1 * k1 + eta2 * eta2 * k2) * thermal_var;
  v.background = eta1 * eta1 * b1 + eta2 * eta2 * b2;
  v.efficiency_imbalance = (eta1 - eta2) * (eta1 - eta2) * m * thermal_var;
  mo.var_diff = v.sum();
  return out;
}

}  // namespace

PhotocountMoments predicted_moments(const ExperimentConfig& config) {
  return predict_terms(config).moments;
}

NrfReport nrf_predict(const ExperimentConfig& config) {
  const PredictedTerms terms = predict_terms(config);
  const PhotocountMoments& mo = terms.moments;
  const double total = mo.mean1 + mo.mean2;
  if (!(total > 0.0)) {
    throw ComputationError("NRF undefined: configuration detects no photons");
  }
  NrfReport report;
  report.mean_n1 = mo.mean1;
  report.mean_n2 = mo.mean2;
  report.contributions = {terms.variance_shares.loss / total, terms.variance_shares.mismatch / total,
                          terms.variance_shares.background / total,
                          terms.variance_shares.efficiency_imbalance / total};
  report.nrf = nrf_from_variance(mo.var_diff, mo.mean1, mo.mean2);
  return report;
}

Classicality classicality_witness(const CorrelationTriple& g) {
  return g.g11 + g.g22 - 2.0 * g.g12 < 0.0 ? Classicality::nonclassical
                                           : Classicality::classical_compatible;
}

namespace {

// Row n holds P(j detected | n incident) for j = 0..n, built by Pascal's rule.
std::vector<std::vector<double>> binomial_table(int truncation, double eta) {
  std::vector<std::vector<double>> rows(truncation + 1);
  rows[0] = {1.0};
  for (int n = 1; n <= truncation; ++n) {
    rows[n].assign(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
      double p = 0.0;
      if (j < n) p += (1.0 - eta) * rows[n - 1][j];
      if (j > 0) p += eta * rows[n - 1][j - 1];
      rows[n][j] = p;
    }
  }
  return rows;
}

std::vector<double> thermal_pmf(double mean, int truncation) {
  std::vector<double> pmf(truncation + 1);
  const double ratio = mean / (1.0 + mean);
  double p = 1.0 / (1.0 + mean);
  for (int n = 0; n <= truncation; ++n) {
    pmf[n] = p;
    p *= ratio;
  }
  return pmf;
}

std::vector<double> poisson_pmf(double mean, int truncation) {
  std::vector<double> pmf(truncation + 1);
  double p = std::exp(-mean);
  for (int n = 0; n <= truncation; ++n) {
    pmf[n] = p;
    p *= mean / static_cast<double>(n + 1);
  }
  return pmf;
}

void check_tail(const std::vector<double>& pmf, const char* source) {
  double kept = 0.0;
  for (double p : pmf) kept += p;
  if (1.0 - kept > kOracleTailTolerance) {
    throw ComputationError(std::string("enumerate_moments: truncated ") + source + " tail mass " +
                           std::to_string(1.0 - kept) + " exceeds tolerance; increase truncation");
  }
}

// Detected moments of one source seen by a single arm.
struct SingleArm {
  double mean = 0.0;
  double var = 0.0;
};

SingleArm enumerate_single(const std::vector<double>& pmf, const std::vector<std::vector<double>>& table) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t n = 0; n < pmf.size(); ++n) {
    for (std::size_t j = 0; j <= n; ++j) {
      const double w = pmf[n] * table[n][j];
      const double x = static_cast<double>(j);
      s1 += w * x;
      s2 += w * x * x;
    }
  }
  return {s1, s2 - s1 * s1};
}

// Detected moments of one matched pair: n photons in each beam, thinned
// independently in the two arms.
PhotocountMoments enumerate_pair(const std::vector<double>& pmf, const std::vector<std::vector<double>>& table1,
                                 const std::vector<std::vector<double>>& table2) {
  double e1 = 0.0, e2 = 0.0, e11 = 0.0, e22 = 0.0, e12 = 0.0, ed = 0.0;
  for (std::size_t n = 0; n < pmf.size(); ++n) {
    for (std::size_t j1 = 0; j1 <= n; ++j1) {
      const double w1 = pmf[n] * table1[n][j1];
      if (w1 == 0.0) continue;
      for (std::size_t j2 = 0; j2 <= n; ++j2) {
        const double w = w1 * table2[n][j2];
        const double x1 = static_cast<double>(j1);
        const double x2 = static_cast<double>(j2);
        e1 += w * x1;
        e2 += w * x2;
        e11 += w * x1 * x1;
        e22 += w * x2 * x2;
        e12 += w * x1 * x2;
        ed += w * (x1 - x2) * (x1 - x2);
      }
    }
  }
  PhotocountMoments mo;
  mo.mean1 = e1;
  mo.mean2 = e2;
  mo.var1 = e11 - e1 * e1;
  mo.var2 = e22 - e2 * e2;
  mo.cov = e12 - e1 * e2;
  mo.var_diff = ed - (e1 - e2) * (e1 - e2);
  return mo;
}

}  // namespace

PhotocountMoments enumerate_moments(const ExperimentConfig& config, int truncation) {
  config.validate();
  if (truncation < 1) throw ComputationError("enumerate_moments: truncation must be >= 1");

  const auto table1 = binomial_table(truncation, config.signal_channel.efficiency);
  const auto table2 = binomial_table(truncation, config.idler_channel.efficiency);
  const double m = static_cast<double>(config.partition.matched_pairs);
  const double k1 = static_cast<double>(config.partition.unmatched_signal);
  const double k2 = static_cast<double>(config.partition.unmatched_idler);

  PhotocountMoments total;
  const auto thermal = thermal_pmf(config.mean_photons_per_mode, truncation);
  check_tail(thermal, "thermal");

  if (m > 0) {
    const PhotocountMoments pair = enumerate_pair(thermal, table1, table2);
    total.mean1 += m * pair.mean1;
    total.mean2 += m * pair.mean2;
    total.var1 += m * pair.var1;
    total.var2 += m * pair.var2;
    total.cov += m * pair.cov;
    total.var_diff += m * pair.var_diff;
  }
  if (k1 > 0) {
    const SingleArm u = enumerate_single(thermal, table1);
    total.mean1 += k1 * u.mean;
    total.var1 += k1 * u.var;
    total.var_diff += k1 * u.var;
  }
  if (k2 > 0) {
    const SingleArm u = enumerate_single(thermal, table2);
    total.mean2 += k2 * u.mean;
    total.var2 += k2 * u.var;
    total.var_diff += k2 * u.var;
  }
  if (config.background_signal > 0.0) {
    const auto pmf = poisson_pmf(config.background_signal, truncation);
    check_tail(pmf, "background");
    const SingleArm bg = enumerate_single(pmf, table1);
    total.mean1 += bg.mean;
    total.var1 += bg.var;
    total.var_diff += bg.var;
  }
  if (config.background_idler > 0.0) {
    const auto pmf = poisson_pmf(config.background_idler, truncation);
    check_tail(pmf, "background");
    const SingleArm bg = enumerate_single(pmf, table2);
    total.mean2 += bg.mean;
    total.var2 += bg.var;
    total.var_diff += bg.var;
  }
  return total;
}

}  // namespace twinbeam
