#pragma once

#include "mre/linalg.hpp"
#include "mre/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mre {

/// State-variable filter bank for Λ(s) = sⁿ + λ_{n-1}sⁿ⁻¹ + … + λ₀.
/// With ż = A z + b·in, tap zᵢ equals sⁱ/Λ(s) applied to the input.
template <typename Scalar = double>
struct LambdaFilter {
  std::vector<Scalar> lambdas;  // λ₀ .. λ_{n-1}
  int n{0};
  Matrix<Scalar> A;
  Vector<Scalar> b;
};

/// Filter states for the u- and y-driven banks plus the regressor ω they
/// produce. `delta` is the running sup of max|ωᵢ|.
template <typename Scalar = double>
struct RegressorState {
  Vector<Scalar> xu;
  Vector<Scalar> xy;
  Vector<Scalar> omega;
  int m{0};
  Scalar last_u{0};
  Scalar delta{0};
};

template <typename Scalar>
LambdaFilter<Scalar> make_lambda_filter(const std::vector<Scalar>& lambdas) {
  if (lambdas.empty()) throw Error(ErrorCode::OrderMismatch, "filter needs at least one coefficient");
  LambdaFilter<Scalar> f;
  f.lambdas = lambdas;
  f.n = static_cast<int>(lambdas.size());
  f.A = companion<Scalar>(Eigen::Map<const Vector<Scalar>>(lambdas.data(), f.n));
  if (!is_hurwitz(f.A)) throw Error(ErrorCode::NotHurwitz, "Λ(s) is not Hurwitz");
  f.b = Vector<Scalar>::Zero(f.n);
  f.b(f.n - 1) = 1;
  return f;
}

/// Ideal parameters [b_m..b_0, a_{n-1}-λ_{n-1}, .., a₀-λ₀]; coefficient
/// lists are highest power first, lambdas are λ₀..λ_{n-1}.
template <typename Scalar>
Vector<Scalar> true_theta(const std::vector<Scalar>& plant_num, const std::vector<Scalar>& plant_den,
                          const std::vector<Scalar>& lambdas) {
  std::size_t first = 0;
  while (first + 1 < plant_num.size() && plant_num[first] == Scalar(0)) ++first;
  const std::vector<Scalar> num(plant_num.begin() + static_cast<std::ptrdiff_t>(first), plant_num.end());
  if (num.empty() || plant_den.size() < 2) throw Error(ErrorCode::OrderMismatch, "empty polynomial");
  const int n = static_cast<int>(plant_den.size()) - 1;
  const int m = static_cast<int>(num.size()) - 1;
  if (static_cast<int>(lambdas.size()) != n) {
    throw Error(ErrorCode::OrderMismatch, "plant order " + std::to_string(n) +
                                              " differs from filter order " +
                                              std::to_string(lambdas.size()));
  }
  if (m > n) throw Error(ErrorCode::OrderMismatch, "numerator degree exceeds denominator degree");

  Vector<Scalar> theta(n + m + 1);
  for (int i = 0; i <= m; ++i) theta(i) = num[static_cast<std::size_t>(i)];
  // plant_den[j] multiplies s^{n-j}; entry m+1+j holds a_{n-1-j} - λ_{n-1-j}
  for (int j = 0; j < n; ++j) {
    theta(m + 1 + j) = plant_den[static_cast<std::size_t>(j + 1)] -
                       lambdas[static_cast<std::size_t>(n - 1 - j)];
  }
  return theta;
}

namespace detail {

template <typename Scalar>
void assemble_omega(RegressorState<Scalar>& s, const LambdaFilter<Scalar>& f) {
  const int n = f.n;
  const int m = s.m;
  s.omega.resize(n + m + 1);
  for (int i = 0; i <= m; ++i) {
    const int power = m - i;
    if (power == n) {
      // sⁿ/Λ(s) is biproper: input minus Σλᵢ zᵢ, using the held input
      const Eigen::Map<const Vector<Scalar>> lam(f.lambdas.data(), n);
      s.omega(i) = s.last_u - lam.dot(s.xu);
    } else {
      s.omega(i) = s.xu(power);
    }
  }
  for (int j = 0; j < n; ++j) s.omega(m + 1 + j) = -s.xy(n - 1 - j);
  if (s.omega.size() > 0) s.delta = std::max(s.delta, s.omega.cwiseAbs().maxCoeff());
}

}  // namespace detail

/// Zero-state regressor for a plant with numerator degree m (m ≤ n).
template <typename Scalar>
RegressorState<Scalar> make_regressor_state(const LambdaFilter<Scalar>& f, int m) {
  if (m < 0 || m > f.n) throw Error(ErrorCode::OrderMismatch, "numerator degree out of range");
  RegressorState<Scalar> s;
  s.m = m;
  s.xu = Vector<Scalar>::Zero(f.n);
  s.xy = Vector<Scalar>::Zero(f.n);
  detail::assemble_omega(s, f);
  return s;
}

/// Advances both filter banks one Euler step with inputs (u, y) and
/// refreshes ω from the new filter states.
template <typename Scalar>
RegressorState<Scalar> regressor_step(const RegressorState<Scalar>& state,
                                      const LambdaFilter<Scalar>& f, Scalar u, Scalar y, Scalar dt) {
  RegressorState<Scalar> next = state;
  next.xu = state.xu + dt * (f.A * state.xu + f.b * u);
  next.xy = state.xy + dt * (f.A * state.xy + f.b * y);
  next.last_u = u;
  detail::assemble_omega(next, f);
  return next;
}

}  // namespace mre
