#include "fair_filter.hpp"

#include <cassert>
#include <cmath>
#include <json.hpp>
#include <string>

namespace fairgf {

namespace {

void check_signal_dims(const Spectrum& spec, const Vector& v,
                       const char* what) {
  if (static_cast<int>(v.size()) != spec.size()) {
    throw Error(ErrorKind::dimension_mismatch,
                std::string(what) + " has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(spec.size()));
  }
}

void check_tau(double tau) {
  if (!(tau > 0.0) || tau > 1.0) {
    throw Error(ErrorKind::invalid_tau,
                "tau must lie in (0,1], got " + std::to_string(tau));
  }
}

}  // namespace

Vector bias_coefficients(const Spectrum& spec, const Vector& sensitive) {
  check_signal_dims(spec, sensitive, "sensitive signal");
  for (int i = 0; i < sensitive.size(); ++i) {
    if (sensitive[i] != 1.0 && sensitive[i] != -1.0) {
      throw Error(ErrorKind::sensitive_not_binary,
                  "sensitive attribute at node " + std::to_string(i) +
                      " is not in {-1,+1}");
    }
  }
  const Vector coeffs = gft(spec, sensitive);
  Vector m(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    m[i] = std::abs(coeffs[i]) * std::abs(1.0 - spec.eigenvalues[i]);
  }
  return m;
}

std::vector<int> cutoff_set(const Vector& m, double tau) {
  check_tau(tau);
  std::vector<int> cut;
  if (m.size() == 0) return cut;
  const double m_max = m.maxCoeff();
  if (m_max == 0.0) return cut;
  const double threshold = tau * m_max;
  for (int i = 0; i < m.size(); ++i) {
    if (m[i] > threshold) cut.push_back(i);
  }
  return cut;
}

Vector fair_filter(const Vector& m, double tau) {
  const std::vector<int> cut = cutoff_set(m, tau);
  const int n = static_cast<int>(m.size());
  const int k = static_cast<int>(cut.size());
  Vector gains = Vector::Ones(n);
  if (k == 0) return gains;
  if (k == n) {
    throw Error(ErrorKind::all_frequencies_cut,
                "every frequency falls in the cutoff set (k = N = " +
                    std::to_string(n) + "); lower tau");
  }
  std::vector<bool> in_cut(n, false);
  for (int i : cut) in_cut[i] = true;
  double complement_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!in_cut[i]) complement_sum += m[i];
  }
  const double complement_mean = complement_sum / static_cast<double>(n - k);
  for (int i : cut) {
    // Membership requires m_i > tau*max(m) >= 0, so the division is safe.
    assert(m[i] > 0.0);
    gains[i] = complement_mean / m[i];
  }
  return gains;
}

Vector uniform_counterpart(const Vector& fair_gains) {
  const int n = static_cast<int>(fair_gains.size());
  const double mean = fair_gains.sum() / static_cast<double>(n);
  return Vector::Constant(n, mean);
}

Matrix effective_topology(const Spectrum& spec, const Vector& gains) {
  check_signal_dims(spec, gains, "gains");
  Vector scale(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    scale[i] = (1.0 - spec.eigenvalues[i]) * gains[i];
  }
  return spec.eigenvectors * scale.asDiagonal() *
         spec.eigenvectors.transpose();
}

double correlation_rho(const Vector& sensitive, const Matrix& a_effective) {
  if (sensitive.size() != a_effective.rows() ||
      a_effective.rows() != a_effective.cols()) {
    throw Error(ErrorKind::dimension_mismatch,
                "sensitive signal and effective topology disagree on N");
  }
  return (a_effective.transpose() * sensitive).lpNorm<1>();
}

double rho_upper_bound(const Spectrum& spec, const Vector& sensitive,
                       const Vector& gains) {
  check_signal_dims(spec, sensitive, "sensitive signal");
  check_signal_dims(spec, gains, "gains");
  const Vector coeffs = gft(spec, sensitive);
  double sum = 0.0;
  for (int i = 0; i < spec.size(); ++i) {
    sum += std::abs(coeffs[i]) * std::abs(1.0 - spec.eigenvalues[i]) *
           std::abs(gains[i]);
  }
  return std::sqrt(static_cast<double>(spec.size())) * sum;
}

Matrix filter_features(const Spectrum& spec, const Vector& gains,
                       const Matrix& features) {
  check_signal_dims(spec, gains, "gains");
  if (features.rows() != spec.size()) {
    throw Error(ErrorKind::dimension_mismatch,
                "feature matrix has " + std::to_string(features.rows()) +
                    " rows, expected " + std::to_string(spec.size()));
  }
  return spec.eigenvectors *
         (gains.asDiagonal() * (spec.eigenvectors.transpose() * features));
}

std::string BiasReport::to_json() const {
  nlohmann::json j;
  j["tau"] = tau;
  j["k"] = k;
  j["rho"] = rho;
  j["rho_bound"] = rho_bound;
  j["m"] = std::vector<double>(m.begin(), m.end());
  j["cutoff"] = cutoff;
  return j.dump(2);
}

BiasReport bias_report(const Spectrum& spec, const Vector& sensitive,
                       double tau, const Vector& gains) {
  BiasReport report;
  report.tau = tau;
  report.m = bias_coefficients(spec, sensitive);
  report.cutoff = cutoff_set(report.m, tau);
  report.k = static_cast<int>(report.cutoff.size());
  report.rho = correlation_rho(sensitive, effective_topology(spec, gains));
  report.rho_bound = rho_upper_bound(spec, sensitive, gains);
  return report;
}

}  // namespace fairgf
