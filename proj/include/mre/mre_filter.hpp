#pragma once

#include "mre/plant.hpp"
#include "mre/regressor.hpp"
#include "mre/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mre {

/// Exponentially weighted memory of the regression:
///   Ω(t) = ∫ e^{-β τ} ω ωᵀ dτ,  Υ(t) = ∫ e^{-β τ} y ω dτ,
/// with τ measured from the start of the current epoch. β = 0 gives the
/// pure-integrator pair. `delta` is the running sup of max|ωᵢ|.
template <typename Scalar = double>
struct ExtendedRegression {
  Matrix<Scalar> Omega;
  Vector<Scalar> Upsilon;
  Scalar beta{0};
  Scalar epoch_t{0};
  Scalar delta{0};

  Eigen::Index dim() const { return Upsilon.size(); }
};

template <typename Scalar>
ExtendedRegression<Scalar> make_extended_regression(Eigen::Index dim, Scalar beta) {
  if (beta < Scalar(0)) throw Error(ErrorCode::BetaNonPositive, "memory factor must be nonnegative");
  ExtendedRegression<Scalar> ext;
  ext.Omega = Matrix<Scalar>::Zero(dim, dim);
  ext.Upsilon = Vector<Scalar>::Zero(dim);
  ext.beta = beta;
  return ext;
}

/// Left-endpoint rectangle step of the memory filters.
template <typename Scalar>
ExtendedRegression<Scalar> mre_step(const ExtendedRegression<Scalar>& ext,
                                    const Vector<Scalar>& omega, Scalar y, Scalar dt) {
  if (omega.size() != ext.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "regressor length differs from Ω dimension");
  }
  ExtendedRegression<Scalar> next = ext;
  const Scalar weight = dt * std::exp(-ext.beta * ext.epoch_t);
  next.Omega.noalias() += weight * omega * omega.transpose();
  symmetrize(next.Omega);
  next.Upsilon += (weight * y) * omega;
  next.epoch_t += dt;
  if (omega.size() > 0) next.delta = std::max(ext.delta, omega.cwiseAbs().maxCoeff());
  return next;
}

/// Restarts the exponential clock so fresh data enters with full weight.
/// `hard` additionally clears Ω and Υ.
template <typename Scalar>
ExtendedRegression<Scalar> reset_epoch(const ExtendedRegression<Scalar>& ext, bool hard = false) {
  ExtendedRegression<Scalar> next = ext;
  next.epoch_t = 0;
  if (hard) {
    next.Omega.setZero();
    next.Upsilon.setZero();
  }
  return next;
}

/// λ_max(Ω) ≤ δ²/β, the a priori cap on the extended regressor.
template <typename Scalar>
bool omega_cap_holds(Scalar lam_max_omega, Scalar delta, Scalar beta) {
  return lam_max_omega <= delta * delta / beta;
}

/// Response of the regression residual η₀(t) = y - θᵀω to plant initial
/// state x0 with u = 0, w = 0 and zero filter states, sampled every dt.
template <typename Scalar>
std::vector<Scalar> initial_condition_residual(const PlantModel<Scalar>& plant,
                                               const LambdaFilter<Scalar>& filter,
                                               const Vector<Scalar>& theta, const Vector<Scalar>& x0,
                                               Scalar dt, std::size_t steps) {
  std::vector<Scalar> eta;
  eta.reserve(steps);
  Vector<Scalar> x = x0;
  auto reg = make_regressor_state(filter, plant.m);
  for (std::size_t k = 0; k < steps; ++k) {
    const Scalar y = plant.output(x, Scalar(0));
    eta.push_back(y - theta.dot(reg.omega));
    reg = regressor_step(reg, filter, Scalar(0), y, dt);
    x = euler_step(plant, x, Scalar(0), dt);
  }
  return eta;
}

/// Componentwise bound on the lumped disturbance
///   ε(t) = ∫ e^{-β τ} [η₀(τ) + w(τ)] ωᵀ(τ) dτ,
/// i.e. sup_t max_i |εᵢ(t)| ≤ δ·(∫ e^{-β τ}|η₀(τ)| dτ + w_max/β).
/// The η₀ envelope is obtained by simulating unit initial states: since
/// η₀ = h(τ)ᵀx0, |η₀(τ)| ≤ ‖h(τ)‖·‖x0‖ for every x0 of the given norm.
template <typename Scalar>
Scalar epsilon_max_estimate(Scalar x0_norm, Scalar w_max, Scalar delta, Scalar beta,
                            const PlantModel<Scalar>& plant, const std::vector<Scalar>& lambdas,
                            Scalar dt = Scalar(1e-4)) {
  if (beta <= Scalar(0)) throw Error(ErrorCode::BetaNonPositive, "memory factor must be positive");
  Scalar ic_term = 0;
  if (x0_norm > Scalar(0)) {
    const auto filter = make_lambda_filter(lambdas);
    const Vector<Scalar> theta = true_theta(plant.num, plant.den, lambdas);

    // slowest decay among plant, filter and memory weight sets the horizon
    Eigen::EigenSolver<Matrix<Scalar>> plant_eig(plant.A, false);
    Eigen::EigenSolver<Matrix<Scalar>> filter_eig(filter.A, false);
    const Scalar slowest = std::min(-plant_eig.eigenvalues().real().maxCoeff(),
                                    -filter_eig.eigenvalues().real().maxCoeff());
    const Scalar horizon = Scalar(40) / (beta + slowest);
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt));

    std::vector<std::vector<Scalar>> responses;
    for (int i = 0; i < plant.n; ++i) {
      responses.push_back(initial_condition_residual(plant, filter, theta,
                                                     Vector<Scalar>::Unit(plant.n, i).eval(), dt,
                                                     steps));
    }
    for (std::size_t k = 0; k < steps; ++k) {
      Scalar h2 = 0;
      for (const auto& r : responses) h2 += r[k] * r[k];
      ic_term += dt * std::exp(-beta * static_cast<Scalar>(k) * dt) * std::sqrt(h2);
    }
    ic_term *= x0_norm;
  }
  return delta * (ic_term + w_max / beta);
}

}  // namespace mre
