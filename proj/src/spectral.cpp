#include "spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <string>

#include "io_util.hpp"

namespace fairgf {

namespace {

constexpr double kSignEps = 1e-12;
// Eigenvalues closer than this are treated as one degenerate group when
// fixing the column order.
constexpr double kDegenerateEps = 1e-10;

void check_dims(int expected, const Vector& v, const char* what) {
  if (static_cast<int>(v.size()) != expected) {
    throw Error(ErrorKind::dimension_mismatch,
                std::string(what) + " has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(expected));
  }
}

// Flip columns so the first entry with |v| > 1e-12 is positive.
void fix_signs(Matrix& vectors) {
  for (int c = 0; c < vectors.cols(); ++c) {
    for (int r = 0; r < vectors.rows(); ++r) {
      const double v = vectors(r, c);
      if (std::abs(v) > kSignEps) {
        if (v < 0.0) vectors.col(c) = -vectors.col(c);
        break;
      }
    }
  }
}

bool column_less(const Matrix& vectors, int a, int b) {
  for (int r = 0; r < vectors.rows(); ++r) {
    const double va = vectors(r, a);
    const double vb = vectors(r, b);
    if (va != vb) return va < vb;
  }
  return false;
}

// Within runs of numerically equal eigenvalues, order columns
// lexicographically so repeated spectra come out the same way every time.
void order_degenerate_runs(Vector& values, Matrix& vectors) {
  const int n = static_cast<int>(values.size());
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && values[end] - values[end - 1] <= kDegenerateEps) ++end;
    if (end - start > 1) {
      std::vector<int> idx(end - start);
      std::iota(idx.begin(), idx.end(), start);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return column_less(vectors, a, b);
      });
      Matrix block(vectors.rows(), end - start);
      Vector vals(end - start);
      for (int k = 0; k < end - start; ++k) {
        block.col(k) = vectors.col(idx[k]);
        vals[k] = values[idx[k]];
      }
      vectors.middleCols(start, end - start) = block;
      values.segment(start, end - start) = vals;
    }
    start = end;
  }
}

}  // namespace

Spectrum eigendecompose(const Matrix& laplacian) {
  if (laplacian.rows() != laplacian.cols()) {
    throw Error(ErrorKind::not_symmetric,
                "matrix is " + std::to_string(laplacian.rows()) + "x" +
                    std::to_string(laplacian.cols()) + ", not square");
  }
  const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw Error(ErrorKind::not_symmetric,
                "matrix is not symmetric (max |L - L^T| = " +
                    std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::eigen_failure, "eigensolver did not converge");
  }
  Spectrum spec{solver.eigenvalues(), solver.eigenvectors()};
  fix_signs(spec.eigenvectors);
  order_degenerate_runs(spec.eigenvalues, spec.eigenvectors);
  return spec;
}

Vector gft(const Spectrum& spec, const Vector& signal) {
  check_dims(spec.size(), signal, "signal");
  return spec.eigenvectors.transpose() * signal;
}

Vector igft(const Spectrum& spec, const Vector& coefficients) {
  check_dims(spec.size(), coefficients, "coefficients");
  return spec.eigenvectors * coefficients;
}

Vector apply_filter(const Spectrum& spec, const Vector& gains,
                    const Vector& signal) {
  check_dims(spec.size(), gains, "gains");
  check_dims(spec.size(), signal, "signal");
  return spec.eigenvectors *
         (gains.array() * (spec.eigenvectors.transpose() * signal).array())
             .matrix();
}

std::vector<std::pair<double, double>> spectrum_profile(const Spectrum& spec,
                                                        const Vector& signal) {
  const Vector coeffs = gft(spec, signal);
  std::vector<std::pair<double, double>> profile;
  profile.reserve(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    profile.emplace_back(spec.eigenvalues[i], std::abs(coeffs[i]));
  }
  return profile;
}

std::string profile_to_csv(
    const std::vector<std::pair<double, double>>& profile) {
  std::string csv = "lambda,magnitude\n";
  for (const auto& [lambda, magnitude] : profile) {
    csv += format_double(lambda);
    csv += ',';
    csv += format_double(magnitude);
    csv += '\n';
  }
  return csv;
}

}  // namespace fairgf
