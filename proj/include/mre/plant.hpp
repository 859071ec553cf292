#pragma once

#include "mre/linalg.hpp"
#include "mre/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace mre {

/// Continuous-time SISO plant ẋ = A x + B u, y = Cᵀx + D u + w in
/// controllable canonical form. D is nonzero only for biproper plants (m = n).
template <typename Scalar = double>
struct PlantModel {
  Matrix<Scalar> A;
  Vector<Scalar> B;
  Vector<Scalar> C;
  Scalar D{0};
  Vector<Scalar> x0;
  int n{0};
  int m{0};
  std::vector<Scalar> num;  // b_m .. b_0
  std::vector<Scalar> den;  // 1, a_{n-1} .. a_0

  Scalar output(const Vector<Scalar>& x, Scalar u, Scalar w = Scalar(0)) const {
    return C.dot(x) + D * u + w;
  }
};

struct NoiseSpec {
  double power{0.0};
  std::uint64_t seed{0};
  double sample_time{1e-4};
};

template <typename Scalar = double>
struct SimStep {
  Scalar t;
  Vector<Scalar> x;
  Scalar y;
  Scalar u;
};

namespace detail {

template <typename Scalar>
std::vector<Scalar> strip_leading_zeros(const std::vector<Scalar>& p) {
  std::size_t first = 0;
  while (first + 1 < p.size() && p[first] == Scalar(0)) ++first;
  return {p.begin() + static_cast<std::ptrdiff_t>(first), p.end()};
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1), never exactly 0 so the log in Box-Muller stays finite.
inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Controllable canonical realization of Z(s)/R(s). Coefficients are given
/// highest power first; the denominator must be monic and Hurwitz.
template <typename Scalar>
PlantModel<Scalar> plant_from_tf(const std::vector<Scalar>& num_coeffs,
                                 const std::vector<Scalar>& den_coeffs) {
  if (num_coeffs.empty() || den_coeffs.empty()) {
    throw Error(ErrorCode::DegreeMismatch, "empty coefficient list");
  }
  const auto num = detail::strip_leading_zeros(num_coeffs);
  const auto& den = den_coeffs;
  if (std::abs(den.front() - Scalar(1)) > Scalar(1e-12)) {
    throw Error(ErrorCode::NonMonicDenominator, "leading denominator coefficient must be 1");
  }
  const int n = static_cast<int>(den.size()) - 1;
  const int m = static_cast<int>(num.size()) - 1;
  if (n < 1 || m > n) {
    throw Error(ErrorCode::DegreeMismatch,
                "numerator degree " + std::to_string(m) + " exceeds denominator degree " +
                    std::to_string(n));
  }

  // a[i] is the coefficient of sⁱ, i = 0..n-1
  Vector<Scalar> a(n);
  for (int i = 0; i < n; ++i) a(i) = den[static_cast<std::size_t>(n - i)];
  Vector<Scalar> b = Vector<Scalar>::Zero(n + 1);
  for (int i = 0; i <= m; ++i) b(i) = num[static_cast<std::size_t>(m - i)];

  PlantModel<Scalar> plant;
  plant.n = n;
  plant.m = m;
  plant.num = num;
  plant.den = den;
  plant.A = companion<Scalar>(a);
  if (!is_hurwitz(plant.A)) {
    throw Error(ErrorCode::NotHurwitz, "denominator has roots with nonnegative real part");
  }
  plant.B = Vector<Scalar>::Zero(n);
  plant.B(n - 1) = 1;
  plant.D = b(n);
  plant.C = b.head(n) - plant.D * a;
  plant.x0 = Vector<Scalar>::Zero(n);
  return plant;
}

/// One explicit Euler step of the state equation.
template <typename Scalar>
Vector<Scalar> euler_step(const PlantModel<Scalar>& plant, const Vector<Scalar>& x, Scalar u,
                          Scalar dt) {
  return x + dt * (plant.A * x + plant.B * u);
}

/// Zero-mean Gaussian sample number k of a band-limited white-noise stream:
/// variance power/sample_time, held for sample_time seconds. Random access in
/// k; the same (seed, k) always yields the same value.
inline double noise_sample(const NoiseSpec& spec, std::uint64_t k) {
  if (spec.power <= 0.0) return 0.0;
  const std::uint64_t base = detail::splitmix64(spec.seed ^ detail::splitmix64(k));
  const double u1 = detail::unit_open(detail::splitmix64(base));
  const double u2 = detail::unit_open(detail::splitmix64(base ^ 0xd1b54a32d192ed03ULL));
  const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return std::sqrt(spec.power / spec.sample_time) * gauss;
}

/// Index of the hold interval that contains time t.
inline std::uint64_t noise_index(const NoiseSpec& spec, double t) {
  return static_cast<std::uint64_t>(std::floor(t / spec.sample_time + 1e-9));
}

/// Σ A_k sin(φ_k t); an empty list is the zero signal.
template <typename Scalar>
Scalar multisine(const std::vector<Scalar>& amplitudes, const std::vector<Scalar>& frequencies,
                 Scalar t) {
  if (amplitudes.size() != frequencies.size()) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude and frequency lists differ in length");
  }
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (amplitudes[i] == Scalar(0)) throw Error(ErrorCode::ZeroAmplitude, "amplitude must be nonzero");
    for (std::size_t j = i + 1; j < frequencies.size(); ++j) {
      if (frequencies[i] == frequencies[j]) {
        throw Error(ErrorCode::DuplicateFrequency, "frequencies must be pairwise distinct");
      }
    }
  }
  Scalar sum = 0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) sum += amplitudes[i] * std::sin(frequencies[i] * t);
  return sum;
}

/// Fixed-step simulation from plant.x0 over `steps` Euler steps. `input(t)`
/// gives u; the disturbance, if any, is added to the output only.
template <typename Scalar, typename InputFn>
std::vector<SimStep<Scalar>> simulate(const PlantModel<Scalar>& plant, InputFn&& input, Scalar dt,
                                      std::size_t steps, const NoiseSpec* noise = nullptr) {
  std::vector<SimStep<Scalar>> log;
  log.reserve(steps + 1);
  Vector<Scalar> x = plant.x0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const Scalar t = static_cast<Scalar>(k) * dt;
    const Scalar u = input(t);
    const Scalar w =
        noise ? static_cast<Scalar>(noise_sample(*noise, noise_index(*noise, static_cast<double>(t))))
              : Scalar(0);
    log.push_back({t, x, plant.output(x, u, w), u});
    if (k < steps) x = euler_step(plant, x, u, dt);
  }
  return log;
}

}  // namespace mre
