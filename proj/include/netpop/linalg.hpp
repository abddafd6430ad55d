#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "netpop/error.hpp"

namespace netpop {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using MatrixXd = DenseMatrix<double>;

template <typename Scalar>
struct ExtremeEigenvalues {
  Scalar largest;
  Scalar smallest;
};

/// Relative tolerance used when accepting a matrix as symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Checks that M is square, at least 2x2, finite and symmetric to within
/// kSymmetryTolerance (relative to max(1, max|M|)), and returns (M + M^T)/2.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols())
    throw InvalidInput("matrix is not square (" + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ")");
  if (m.rows() < 2) throw InvalidInput("matrix order must be at least 2");
  if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
  const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
  const Scalar skew = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (skew > Scalar(kSymmetryTolerance) * scale)
    throw InvalidInput("matrix is not symmetric (max |M - M^T| = " + std::to_string(double(skew)) +
                       ")");
  return (m + m.transpose()) / Scalar(2);
}

/// Largest and smallest eigenvalue of a symmetric matrix.
///
/// Householder tridiagonalisation followed by implicit QR (Eigen's
/// SelfAdjointEigenSolver, eigenvalues only); accurate to a few ulps of
/// ||M||, well inside the 1e-8 relative contract.
template <typename Derived>
ExtremeEigenvalues<typename Derived::Scalar> extreme_eigenvalues(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const DenseMatrix<Scalar> sym = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidInput("eigenvalue iteration did not converge");
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev(ev.size() - 1), ev(0)};
}

/// sigma_1 of a symmetric matrix, i.e. max(|lambda_1|, |lambda_n|).
template <typename Derived>
typename Derived::Scalar largest_singular_value(const Eigen::MatrixBase<Derived>& m) {
  using std::abs;
  const auto ext = extreme_eigenvalues(m);
  return std::max(abs(ext.largest), abs(ext.smallest));
}

}  // namespace netpop
