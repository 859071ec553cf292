#pragma once

#include "mre/linalg.hpp"
#include "mre/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace mre {

/// Convergence-bound quantities evaluated on one run. Γ⁻¹ extremes are reciprocals of
/// Γ's extremes taken at `t_eval`.
struct BoundsReport {
  double delta{0};
  double omega_cap{0};
  double eps_max{0};
  double kappa{0};
  double r_small{0};
  double R_ultimate{0};
  double gamma_pre_T{0};
  double gamma_limit{0};
  double T_used{0};
  double t_eval{0};
  double lam_min_Omega_T{0};
  double lam_min_Ginv{0};
  double lam_max_Ginv{0};
};

/// δ²/β, the cap on λ_max(Ω).
template <typename Scalar>
Scalar omega_cap(Scalar delta, Scalar beta) {
  if (beta <= Scalar(0)) throw Error(ErrorCode::NonPositiveInput, "β must be positive");
  return delta * delta / beta;
}

/// Exponential rate of V = θ̃ᵀΓ⁻¹θ̃ after excitation:
/// (λ²_min(Ω(T)) + λ·λ_min(Γ⁻¹)) / λ_max(Γ⁻¹).
template <typename Scalar>
Scalar kappa(Scalar lam_min_Omega_T, Scalar lambda_f, Scalar lam_min_Ginv, Scalar lam_max_Ginv) {
  if (!(lam_min_Ginv > Scalar(0)) || lam_max_Ginv < lam_min_Ginv) {
    throw Error(ErrorCode::NonPositiveEigen, "need λ_max(Γ⁻¹) ≥ λ_min(Γ⁻¹) > 0");
  }
  return (lam_min_Omega_T * lam_min_Omega_T + lambda_f * lam_min_Ginv) / lam_max_Ginv;
}

struct UltimateBound {
  double r;
  double R;
};

/// Radius r of the set where V' may be positive, and the ultimate bound
/// R = r·√(λ_max(Γ⁻¹)/λ_min(Γ⁻¹)).
inline UltimateBound ultimate_bound(double delta, double beta, double eps_max, int dim,
                                    double kappa_v, double lam_min_Ginv, double lam_max_Ginv) {
  if (!(delta > 0) || !(beta > 0) || eps_max < 0 || dim <= 0 || !(kappa_v > 0) ||
      !(lam_min_Ginv > 0) || !(lam_max_Ginv > 0)) {
    throw Error(ErrorCode::NonPositiveInput, "ultimate bound inputs must be positive");
  }
  const double r = 2.0 * delta * delta / beta * eps_max * std::sqrt(double(dim)) /
                   (kappa_v * lam_max_Ginv);
  return {r, r * std::sqrt(lam_max_Ginv / lam_min_Ginv)};
}

inline double ultimate_bound_R(double delta, double beta, double eps_max, int dim, double kappa_v,
                               double lam_min_Ginv, double lam_max_Ginv) {
  return ultimate_bound(delta, beta, eps_max, dim, kappa_v, lam_min_Ginv, lam_max_Ginv).R;
}

/// Asymptotic ‖Γ‖ once the regressor is excited: λ / λ²_min(Ω).
template <typename Scalar>
Scalar gamma_norm_limit(Scalar lambda_f, Scalar lam_min_Omega) {
  if (!(lam_min_Omega > Scalar(0))) {
    throw Error(ErrorCode::ZeroExcitation, "limit undefined before Ω is positive definite");
  }
  return lambda_f / (lam_min_Omega * lam_min_Omega);
}

/// √(e^{2λ(T-t)} L₀) with L₀ = ‖Γ(0)‖².
template <typename Scalar>
Scalar gamma_pre_T_bound(Scalar L0, Scalar lambda_f, Scalar T, Scalar t) {
  if (t >= T) throw Error(ErrorCode::TOrderViolation, "bound applies only for t < T");
  return std::sqrt(std::exp(2 * lambda_f * (T - t)) * L0);
}

/// Ultimate level of V under disturbance: 4δ⁴β⁻²ε²_max·dim / (κ²λ_max(Γ⁻¹)).
inline double disturbed_v_floor(double delta, double beta, double eps_max, int dim,
                                double kappa_v, double lam_max_Ginv) {
  return 4.0 * std::pow(delta, 4) / (beta * beta) * eps_max * eps_max * dim /
         (kappa_v * kappa_v * lam_max_Ginv);
}

/// V = θ̃ᵀΓ⁻¹θ̃ by a Cholesky solve Γz = θ̃ (Γ is never inverted).
template <typename Scalar>
Scalar lyapunov_value(const Vector<Scalar>& theta_err, const Matrix<Scalar>& Gamma) {
  Eigen::LLT<Matrix<Scalar>> llt(Gamma);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::GammaLostPositivity, "Γ is not positive definite");
  }
  return theta_err.dot(llt.solve(theta_err));
}

}  // namespace mre
