#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lpvss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Shape, index, or configuration violations detected before any numerics run.
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical preconditions violated at run time (loss of positive definiteness,
/// singular matrix at a visited scheduling point, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Single global tolerance for covariance PD/PSD checks, relative to the trace.
inline constexpr double kCovarianceTol = 1e-10;

/// Failure threshold for inverting the innovation covariance, relative to its trace.
inline constexpr double kInnovationCovTol = 1e-12;

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

inline double min_eigenvalue(const Matrix& sym) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

inline double max_eigenvalue(const Matrix& sym) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues().maxCoeff();
}

inline double min_singular_value(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues().minCoeff();
}

/// PD test relative to the trace: min eig > tol * max(trace, 1).
inline bool is_positive_definite(const Matrix& sym, double tol = kCovarianceTol) {
  return min_eigenvalue(sym) > tol * std::max(sym.trace(), 1.0);
}

/// PSD test up to -tol * max(trace, 1) to absorb round-off.
inline bool is_positive_semidefinite(const Matrix& sym, double tol = kCovarianceTol) {
  return min_eigenvalue(sym) >= -tol * std::max(sym.trace(), 1.0);
}

/// Inverse of a symmetric PD matrix through its eigendecomposition, so the
/// caller can log the spectrum and detect near-singularity.
struct SymmetricInverse {
  Matrix inverse;
  double min_eig = 0.0;
  double max_eig = 0.0;
  double condition() const { return max_eig / min_eig; }
};

inline SymmetricInverse invert_spd(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector& lam = es.eigenvalues();
  SymmetricInverse out;
  out.min_eig = lam.minCoeff();
  out.max_eig = lam.maxCoeff();
  out.inverse = es.eigenvectors() * lam.cwiseInverse().asDiagonal() *
                es.eigenvectors().transpose();
  return out;
}

/// Symmetric inverse square root, used to normalize innovations.
inline Matrix inverse_sqrt_spd(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace lpvss
