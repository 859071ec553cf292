#pragma once

#include "mre/mre_filter.hpp"
#include "mre/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <string>

namespace mre {

/// RLS-with-forgetting state on the extended regression: estimate θ̂ and
/// adaptation-rate matrix Γ, propagated directly (Γ⁻¹ is never formed).
template <typename Scalar = double>
struct EstimatorState {
  Vector<Scalar> theta_hat;
  Matrix<Scalar> Gamma;
  Scalar lambda_f{1};
  Scalar t{0};
  long long steps{0};
  // positive-definiteness of Γ is verified every `pd_check_every` steps
  int pd_check_every{100};
};

/// Constant-gain estimator state shared by the gradient and integrator
/// baselines.
template <typename Scalar = double>
struct BaselineState {
  Vector<Scalar> theta_hat;
  Matrix<Scalar> Gamma_const;
};

template <typename Scalar>
EstimatorState<Scalar> make_estimator(Eigen::Index dim, Scalar lambda_f, Scalar gamma0 = Scalar(1)) {
  EstimatorState<Scalar> s;
  s.theta_hat = Vector<Scalar>::Zero(dim);
  s.Gamma = gamma0 * Matrix<Scalar>::Identity(dim, dim);
  s.lambda_f = lambda_f;
  return s;
}

template <typename Scalar>
BaselineState<Scalar> make_baseline(Eigen::Index dim, Scalar gamma = Scalar(1)) {
  return {Vector<Scalar>::Zero(dim), gamma * Matrix<Scalar>::Identity(dim, dim)};
}

/// One Euler step of
///   θ̂' = -Γ Ω (Ωθ̂ - Υ),   Γ' = λΓ - Γ Ω Ωᵀ Γ.
template <typename Scalar>
EstimatorState<Scalar> rls_mre_step(const EstimatorState<Scalar>& state,
                                    const ExtendedRegression<Scalar>& ext, Scalar dt) {
  const Eigen::Index dim = state.theta_hat.size();
  if (ext.dim() != dim || state.Gamma.rows() != dim || state.Gamma.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "estimator and extended regression sizes differ");
  }
  const Matrix<Scalar>& Omega = ext.Omega;
  const Vector<Scalar> residual = Omega * state.theta_hat - ext.Upsilon;
  const Matrix<Scalar> gamma_omega = state.Gamma * Omega;

  EstimatorState<Scalar> next = state;
  next.theta_hat.noalias() -= dt * (gamma_omega * residual);
  next.Gamma += dt * (state.lambda_f * state.Gamma - gamma_omega * gamma_omega.transpose());
  symmetrize(next.Gamma);
  next.t += dt;
  ++next.steps;

  if (next.pd_check_every > 0 && next.steps % next.pd_check_every == 0) {
    Eigen::LLT<Matrix<Scalar>> llt(next.Gamma);
    if (llt.info() != Eigen::Success || !next.Gamma.allFinite()) {
      throw Error(ErrorCode::GammaLostPositivity,
                  "Γ is no longer positive definite at t = " + std::to_string(double(next.t)) +
                      "; reduce dt relative to λ and ‖Ω‖");
    }
  }
  return next;
}

/// θ̂' = -Γ ω (θ̂ᵀω - y) with constant Γ.
template <typename Scalar>
BaselineState<Scalar> gradient_step(const BaselineState<Scalar>& state, const Vector<Scalar>& omega,
                                    Scalar y, Scalar dt) {
  if (omega.size() != state.theta_hat.size()) {
    throw Error(ErrorCode::DimensionMismatch, "regressor and estimate sizes differ");
  }
  BaselineState<Scalar> next = state;
  const Scalar prediction_error = state.theta_hat.dot(omega) - y;
  next.theta_hat.noalias() -= (dt * prediction_error) * (state.Gamma_const * omega);
  return next;
}

enum class StepScheme {
  // θ̂⁺ = θ̂ - dt Γ Ω (Ω θ̂⁺ - Υ): one small linear solve, stable for any dt
  LinearlyImplicit,
  // θ̂⁺ = θ̂ - dt Γ Ω (Ω θ̂ - Υ): diverges once dt·λ_max(Γ Ω²) > 2
  Explicit,
};

/// θ̂' = -Γ Ω (Ωθ̂ - Υ) with constant Γ on the pure-integrator (β = 0) pair.
/// Ω grows without bound here, so the default scheme is linearly implicit.
template <typename Scalar>
BaselineState<Scalar> integrator_pi_step(const BaselineState<Scalar>& state,
                                         const ExtendedRegression<Scalar>& ext_beta0, Scalar dt,
                                         StepScheme scheme = StepScheme::LinearlyImplicit) {
  const Eigen::Index dim = state.theta_hat.size();
  if (ext_beta0.dim() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "estimator and extended regression sizes differ");
  }
  BaselineState<Scalar> next = state;
  const Matrix<Scalar>& Omega = ext_beta0.Omega;
  if (scheme == StepScheme::Explicit) {
    const Vector<Scalar> residual = Omega * state.theta_hat - ext_beta0.Upsilon;
    next.theta_hat.noalias() -= dt * (state.Gamma_const * (Omega * residual));
    return next;
  }
  const Matrix<Scalar> gain = dt * state.Gamma_const * Omega;
  const Matrix<Scalar> lhs = Matrix<Scalar>::Identity(dim, dim) + gain * Omega;
  next.theta_hat = lhs.partialPivLu().solve(state.theta_hat + gain * ext_beta0.Upsilon);
  return next;
}

template <typename Scalar>
Scalar parameter_error(const Vector<Scalar>& theta_hat, const Vector<Scalar>& theta_true) {
  if (theta_hat.size() != theta_true.size()) {
    throw Error(ErrorCode::DimensionMismatch, "estimate and true parameter sizes differ");
  }
  return (theta_hat - theta_true).norm();
}

}  // namespace mre
