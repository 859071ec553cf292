#include "mre/linalg.hpp"
#include "mre/mre_filter.hpp"
#include "mre/plant.hpp"
#include "mre/regressor.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mre;

TEST(ExtendedRegression, Preconditions) {
  EXPECT_THROW(make_extended_regression<double>(4, -1.0), Error);
  EXPECT_NO_THROW(make_extended_regression<double>(4, 0.0));
  auto ext = make_extended_regression<double>(2, 1.0);
  EXPECT_THROW(mre_step<double>(ext, VectorXd::Ones(3), 1.0, 1e-3), Error);
}

TEST(ExtendedRegression, ConstantRegressorClosedForm) {
  // ω = [1, 2], β = 2: Ω(t) = ωωᵀ (1 - e^{-2t})/2
  auto ext = make_extended_regression<double>(2, 2.0);
  const Eigen::Vector2d w(1, 2);
  const double dt = 1e-5;
  for (int k = 0; k < 100000; ++k) ext = mre_step<double>(ext, w, 3.0, dt);
  const double g = (1 - std::exp(-2.0)) / 2;
  EXPECT_LT((ext.Omega - g * w * w.transpose()).norm(), 1e-4);
  EXPECT_LT((ext.Upsilon - 3.0 * g * w).norm(), 1e-4);
  EXPECT_NEAR(ext.delta, 2.0, 0);
}

TEST(ExtendedRegression, SymmetricAndMonotoneWithinEpoch) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  auto ext = make_extended_regression<double>(3, 1.5);
  for (int k = 0; k < 2000; ++k) {
    const VectorXd w = Eigen::Vector3d(g(rng), g(rng), g(rng));
    const auto next = mre_step(ext, w, g(rng), 1e-3);
    EXPECT_TRUE(is_symmetric(next.Omega));
    EXPECT_GE(lambda_min((next.Omega - ext.Omega).eval()), -1e-14);
    ext = next;
  }
}

TEST(ExtendedRegression, StreamingMatchesQuadrature) {
  const auto plant = plant_from_tf<double>({4, 1}, {1, 1, 4});
  const auto f = make_lambda_filter<double>({15, 45});
  auto reg = make_regressor_state(f, plant.m);
  auto ext = make_extended_regression<double>(4, 2.0);
  VectorXd x = plant.x0;
  std::vector<VectorXd> omega;
  const double dt = 1e-4;
  for (int k = 0; k < 100000; ++k) {
    const double u = 100 + 10 * std::sin(2.0 * k * dt);
    const double y = plant.output(x, u);
    omega.push_back(reg.omega);
    ext = mre_step(ext, reg.omega, y, dt);
    reg = regressor_step(reg, f, u, y, dt);
    x = euler_step(plant, x, u, dt);
  }
  omega.push_back(reg.omega);
  const MatrixXd ref = oracle::omega_trapezoid(omega, 2.0, dt);
  EXPECT_LT((ext.Omega - ref).norm() / ref.norm(), 1e-6);
}

TEST(ExtendedRegression, CapHoldsOnRandomRegressors) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (double beta : {0.5, 1.0, 2.0}) {
    auto ext = make_extended_regression<double>(2, beta);
    for (int k = 0; k < 20000; ++k) {
      ext = mre_step<double>(ext, Eigen::Vector2d(u(rng), u(rng)), 0.0, 1e-3);
      ASSERT_TRUE(omega_cap_holds(lambda_max(ext.Omega), ext.delta, beta)) << k;
    }
  }
}

TEST(ExtendedRegression, ResetEpoch) {
  auto ext = make_extended_regression<double>(1, 2.0);
  for (int k = 0; k < 1000; ++k) ext = mre_step<double>(ext, VectorXd::Ones(1), 1.0, 1e-3);
  EXPECT_NEAR(ext.epoch_t, 1.0, 1e-9);
  const auto soft = reset_epoch(ext);
  EXPECT_EQ(soft.epoch_t, 0);
  EXPECT_EQ(soft.Omega, ext.Omega);
  const auto hard = reset_epoch(ext, true);
  EXPECT_EQ(hard.Omega.norm(), 0);
  EXPECT_EQ(hard.Upsilon.norm(), 0);
  // fresh data enters with full weight after the reset
  const auto a = mre_step<double>(soft, VectorXd::Ones(1), 1.0, 1e-3);
  EXPECT_NEAR(a.Omega(0, 0) - soft.Omega(0, 0), 1e-3, 1e-15);
}

TEST(EpsilonMax, ZeroWithoutDisturbance) {
  const auto plant = plant_from_tf<double>({4, 1}, {1, 1, 4});
  EXPECT_EQ(epsilon_max_estimate(0.0, 0.0, 6.0, 2.0, plant, {15.0, 45.0}), 0.0);
  EXPECT_THROW(epsilon_max_estimate(0.0, 1.0, 6.0, 0.0, plant, {15.0, 45.0}), Error);
}

TEST(EpsilonMax, NoiseTermAndInitialStateBound) {
  const auto plant = plant_from_tf<double>({4, 1}, {1, 1, 4});
  EXPECT_NEAR(epsilon_max_estimate(0.0, 10.0, 2.0, 2.0, plant, {15.0, 45.0}), 10.0, 1e-12);
  const double with_x0 = epsilon_max_estimate(1.0, 0.0, 2.0, 2.0, plant, {15.0, 45.0}, 1e-3);
  EXPECT_GT(with_x0, 0.0);

  // the bound dominates the actual ε produced by a unit initial state
  const auto f = make_lambda_filter<double>({15, 45});
  const VectorXd theta = true_theta<double>({4, 1}, {1, 1, 4}, {15, 45});
  for (int i = 0; i < 2; ++i) {
    const VectorXd x0 = VectorXd::Unit(2, i);
    const auto eta = initial_condition_residual(plant, f, theta, x0, 1e-3, 20000);
    auto reg = make_regressor_state(f, plant.m);
    VectorXd x = x0;
    VectorXd eps = VectorXd::Zero(4);
    double delta = 0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
      eps += 1e-3 * std::exp(-2.0 * k * 1e-3) * eta[k] * reg.omega;
      delta = std::max(delta, reg.delta);
      const double y = plant.output(x, 0.0);
      reg = regressor_step(reg, f, 0.0, y, 1e-3);
      x = euler_step(plant, x, 0.0, 1e-3);
    }
    const double bound = epsilon_max_estimate(1.0, 0.0, delta, 2.0, plant, {15.0, 45.0}, 1e-3);
    EXPECT_LE(eps.cwiseAbs().maxCoeff(), bound);
  }
}
