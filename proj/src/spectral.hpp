#pragma once

#include <utility>
#include <vector>

#include "graph.hpp"

namespace fairgf {

/// Eigendecomposition L = V diag(lambda) V^T of a normalized Laplacian.
/// Eigenvalues ascend; column i of `eigenvectors` pairs with eigenvalue i.
/// Deterministic: within each column the first entry of magnitude > 1e-12
/// is positive, and columns of a numerically repeated eigenvalue are ordered
/// lexicographically after that sign fix.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Throws not_symmetric if L is not symmetric (tolerance 1e-12) and
/// eigen_failure if the solver does not converge.
Spectrum eigendecompose(const Matrix& laplacian);

/// Graph Fourier transform: coefficients = V^T signal.
Vector gft(const Spectrum& spec, const Vector& signal);

/// Inverse transform: signal = V coefficients.
Vector igft(const Spectrum& spec, const Vector& coefficients);

/// Frequency-domain filtering: out = V diag(gains) V^T signal.
Vector apply_filter(const Spectrum& spec, const Vector& gains,
                    const Vector& signal);

/// (eigenvalue, |coefficient|) pairs in ascending eigenvalue order.
std::vector<std::pair<double, double>> spectrum_profile(const Spectrum& spec,
                                                        const Vector& signal);

/// `lambda,magnitude` rows with a header, full precision.
std::string profile_to_csv(
    const std::vector<std::pair<double, double>>& profile);

}  // namespace fairgf
