#pragma once

#include <string>
#include <vector>

#include "spectral.hpp"

namespace fairgf {

/// Per-frequency bias coefficients m_i = |s~_i| * |1 - lambda_i| for a
/// binary sensitive signal s in {-1,+1}^N. m_i measures how much frequency i
/// contributes to the correlation between the sensitive attribute and the
/// effective topology.
Vector bias_coefficients(const Spectrum& spec, const Vector& sensitive);

/// Cutoff set C = { i : m_i > tau * max(m) }, strict inequality.
/// Empty when max(m) = 0. Requires 0 < tau <= 1.
std::vector<int> cutoff_set(const Vector& m, double tau);

/// Frequency response of the fairness-aware filter:
///   gain_i = mean(m over complement of C) / m_i   for i in C,
///   gain_i = 1                                    otherwise.
/// Throws all_frequencies_cut when C covers every frequency (the complement
/// mean is then undefined); lowering tau resolves that.
Vector fair_filter(const Vector& m, double tau);

/// Constant filter with the same l1 mass: every gain equals the mean of the
/// fair filter's gains.
Vector uniform_counterpart(const Vector& fair_gains);

/// Effective aggregation topology A^f = V (I - Lambda) diag(gains) V^T.
/// With all-ones gains this is exactly the normalized adjacency.
Matrix effective_topology(const Spectrum& spec, const Vector& gains);

/// Total linear correlation rho = || s^T A^f ||_1, computed from the dense
/// product so it stays an independent check on the spectral bound.
double correlation_rho(const Vector& sensitive, const Matrix& a_effective);

/// Upper bound sqrt(N) * sum_i |s~_i| |1 - lambda_i| |gain_i| on rho.
double rho_upper_bound(const Spectrum& spec, const Vector& sensitive,
                       const Vector& gains);

/// Column-wise filtering of a feature matrix: X^f = V diag(gains) V^T X.
Matrix filter_features(const Spectrum& spec, const Vector& gains,
                       const Matrix& features);

/// Bias diagnostics for one filter: coefficients, cutoff set, rho and its
/// upper bound.
struct BiasReport {
  double tau = 0.0;
  int k = 0;                    // |cutoff|
  double rho = 0.0;
  double rho_bound = 0.0;
  Vector m;
  std::vector<int> cutoff;

  /// {"tau":..., "k":..., "rho":..., "rho_bound":..., "m":[...], "cutoff":[...]}
  std::string to_json() const;
};

/// Evaluate the report for an arbitrary filter response (the cutoff set and
/// m describe the spectrum/sensitive pair; rho and the bound describe the
/// given gains).
BiasReport bias_report(const Spectrum& spec, const Vector& sensitive,
                       double tau, const Vector& gains);

}  // namespace fairgf
