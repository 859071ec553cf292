#pragma once

#include "mre/linalg.hpp"
#include "mre/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <optional>
#include <vector>

namespace mre {

struct ExcitationReport {
  bool ie_met{false};
  std::optional<double> T_detect;
  double alpha{0.0};
  bool pe_met_window{false};
  int rank_W{0};
};

/// Regressor samples on a strictly increasing time grid.
template <typename Scalar = double>
struct RegressorLog {
  std::vector<Scalar> t;
  std::vector<Vector<Scalar>> omega;

  void push(Scalar time, const Vector<Scalar>& w) {
    t.push_back(time);
    omega.push_back(w);
  }
  std::size_t size() const { return t.size(); }
};

/// IE certificate on the extended regressor: λ_min(Ω) ≥ threshold.
template <typename Derived>
bool check_ie_via_omega(const Eigen::MatrixBase<Derived>& Omega,
                        typename Derived::Scalar alpha_threshold) {
  if (!is_symmetric(Omega)) throw Error(ErrorCode::NotSymmetric, "Ω must be symmetric");
  if (Omega.size() == 0) return false;
  return lambda_min(Omega) >= alpha_threshold;
}

/// Numerical rank of W = [ω(t₁) … ω(t_p)]: singular values above tol·σ_max.
template <typename Scalar>
int check_ie_rank(const std::vector<Vector<Scalar>>& samples, Scalar tol = Scalar(1e-8)) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "rank test needs at least one sample");
  const Eigen::Index dim = samples.front().size();
  Matrix<Scalar> W(dim, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].size() != dim) throw Error(ErrorCode::DimensionMismatch, "ragged sample list");
    W.col(static_cast<Eigen::Index>(j)) = samples[j];
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(W);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == Scalar(0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

namespace detail {

// Cumulative trapezoidal integral of ω ωᵀ at every sample time.
template <typename Scalar>
std::vector<Matrix<Scalar>> cumulative_gram(const RegressorLog<Scalar>& log) {
  const Eigen::Index dim = log.omega.front().size();
  std::vector<Matrix<Scalar>> cum(log.size(), Matrix<Scalar>::Zero(dim, dim));
  for (std::size_t k = 1; k < log.size(); ++k) {
    const Scalar h = log.t[k] - log.t[k - 1];
    cum[k] = cum[k - 1] + (h / 2) * (log.omega[k - 1] * log.omega[k - 1].transpose() +
                                     log.omega[k] * log.omega[k].transpose());
  }
  return cum;
}

template <typename Scalar>
Matrix<Scalar> gram_at(const RegressorLog<Scalar>& log, const std::vector<Matrix<Scalar>>& cum,
                       Scalar time) {
  const auto it = std::lower_bound(log.t.begin(), log.t.end(), time);
  const auto k = static_cast<std::size_t>(it - log.t.begin());
  if (k == 0) return cum.front();
  if (k >= log.size()) return cum.back();
  if (log.t[k] == time) return cum[k];
  const Scalar s = (time - log.t[k - 1]) / (log.t[k] - log.t[k - 1]);
  return (1 - s) * cum[k - 1] + s * cum[k];
}

}  // namespace detail

/// Smallest eigenvalue of ∫ₜ^{t+T} ω ωᵀ dτ for every window start t in
/// the log (trapezoidal rule, window end interpolated).
template <typename Scalar>
std::vector<Scalar> window_excitation(const RegressorLog<Scalar>& log, Scalar window_T) {
  if (log.size() < 2 || log.t.back() - log.t.front() < window_T) {
    throw Error(ErrorCode::LogTooShort, "log is shorter than the excitation window");
  }
  const auto cum = detail::cumulative_gram(log);
  std::vector<Scalar> levels;
  for (std::size_t i = 0; i < log.size() && log.t[i] + window_T <= log.t.back(); ++i) {
    const Matrix<Scalar> window = detail::gram_at(log, cum, log.t[i] + window_T) - cum[i];
    levels.push_back(lambda_min(window));
  }
  return levels;
}

/// Persistent-excitation test: every window of length T has excitation ≥ α.
template <typename Scalar>
bool check_pe_window(const RegressorLog<Scalar>& log, Scalar window_T, Scalar alpha) {
  const auto levels = window_excitation(log, window_T);
  return !levels.empty() &&
         std::all_of(levels.begin(), levels.end(), [&](Scalar v) { return v >= alpha; });
}

}  // namespace mre
