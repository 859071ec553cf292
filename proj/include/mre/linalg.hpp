#pragma once

#include "mre/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mre {

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order. Off-diagonal mass is driven below
/// `tol` times the Frobenius norm (absolute `tol` for the zero matrix).
template <typename Derived>
Vector<typename Derived::Scalar> symmetric_eigenvalues(
    const Eigen::MatrixBase<Derived>& input,
    typename Derived::Scalar tol = typename Derived::Scalar(1e-12)) {
  using Scalar = typename Derived::Scalar;
  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "symmetric_eigenvalues needs a square matrix");
  }
  Matrix<Scalar> a = input;
  const Eigen::Index n = a.rows();
  const Scalar scale = std::max(a.norm(), Scalar(1));
  const Scalar target = tol * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    Scalar off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2 * off) <= target) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (2 * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Scalar c = 1 / std::sqrt(t * t + 1);
        const Scalar s = t * c;
        // a <- Jᵀ a J with J the (p, q) Givens rotation
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector<Scalar> eig = a.diagonal();
  std::sort(eig.data(), eig.data() + eig.size());
  return eig;
}

template <typename Derived>
typename Derived::Scalar lambda_min(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return symmetric_eigenvalues(m)(0);
}

template <typename Derived>
typename Derived::Scalar lambda_max(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  const auto eig = symmetric_eigenvalues(m);
  return eig(eig.size() - 1);
}

/// Spectral norm of a symmetric matrix (largest |eigenvalue|).
template <typename Derived>
typename Derived::Scalar symmetric_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  const auto eig = symmetric_eigenvalues(m);
  return std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar rel_tol = typename Derived::Scalar(1e-9)) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) return false;
  const Scalar scale = std::max(m.cwiseAbs().maxCoeff(), Scalar(1));
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// Strict left-half-plane test for the eigenvalues of a square matrix.
template <typename Derived>
bool is_hurwitz(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0) return true;
  Eigen::EigenSolver<Matrix<Scalar>> solver(a.eval(), false);
  if (solver.info() != Eigen::Success) return false;
  return (solver.eigenvalues().real().array() < Scalar(0)).all();
}

/// Companion matrix of the monic polynomial sⁿ + c[n-1] sⁿ⁻¹ + … + c[0],
/// in controllable canonical (bottom-row) form. `low_to_high` holds c[0..n-1].
template <typename Scalar>
Matrix<Scalar> companion(const Vector<Scalar>& low_to_high) {
  const Eigen::Index n = low_to_high.size();
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n, n);
  if (n > 1) a.topRightCorner(n - 1, n - 1).setIdentity();
  a.row(n - 1) = -low_to_high.transpose();
  return a;
}

}  // namespace mre
