#include "mre/plant.hpp"
#include "mre/regressor.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mre;

TEST(TrueTheta, PaperPlant) {
  const VectorXd theta = true_theta<double>({4, 1}, {1, 1, 4}, {15, 45});
  ASSERT_EQ(theta.size(), 4);
  EXPECT_EQ(theta, Eigen::Vector4d(4, 1, -44, -11));
}

TEST(TrueTheta, OrderMismatch) {
  EXPECT_THROW(true_theta<double>({1}, {1, 1, 4}, {15}), Error);
  try {
    true_theta<double>({1}, {1, 1, 4}, {1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderMismatch);
  }
}

TEST(LambdaFilter, Preconditions) {
  EXPECT_THROW(make_lambda_filter<double>({}), Error);
  EXPECT_THROW(make_lambda_filter<double>({-1, 1}), Error);
  const auto f = make_lambda_filter<double>({15, 45});
  EXPECT_EQ(f.n, 2);
}

TEST(Regressor, ZeroAtStart) {
  const auto f = make_lambda_filter<double>({15, 45});
  const auto s = make_regressor_state(f, 1);
  EXPECT_EQ(s.omega, VectorXd::Zero(4));
}

TEST(Regressor, ConstantInputDcLimit) {
  const auto plant = plant_from_tf<double>({4, 1}, {1, 1, 4});
  const auto f = make_lambda_filter<double>({15, 45});
  auto s = make_regressor_state(f, plant.m);
  VectorXd x = plant.x0;
  const double dt = 1e-4;
  for (int k = 0; k < 600000; ++k) {
    const double y = plant.output(x, 100.0);
    s = regressor_step(s, f, 100.0, y, dt);
    x = euler_step(plant, x, 100.0, dt);
  }
  const Eigen::Vector4d expected(0, 100.0 / 15, 0, -25.0 / 15);
  EXPECT_LT((s.omega - expected).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_GE(s.delta, s.omega.cwiseAbs().maxCoeff());
}

// Randomly drawn stable plants and filters, multisine input, zero initial
// state: the discrete regression identity holds to rounding error. Biproper
// plants see the input one step late through the held sⁿ/Λ tap, which leaves
// exactly D·(u_k - u_{k-1}).
TEST(Regressor, IdentityHoldsForRandomPlants) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pole(0.5, 6.0), zero(-3.0, 3.0), lam(2.0, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double p1 = pole(rng), p2 = pole(rng);
    const std::vector<double> den{1, p1 + p2, p1 * p2};
    const std::vector<double> num = trial % 3 == 0 ? std::vector<double>{zero(rng), zero(rng), zero(rng)}
                                                   : std::vector<double>{zero(rng), zero(rng)};
    const double l1 = lam(rng), l2 = lam(rng);
    const std::vector<double> lambdas{l1 * l2, l1 + l2};
    const auto plant = plant_from_tf(num, den);
    const auto f = make_lambda_filter(lambdas);
    const VectorXd theta = true_theta(num, den, lambdas);
    auto s = make_regressor_state(f, plant.m);
    VectorXd x = plant.x0;
    const double dt = 1e-3;
    double worst = 0, scale = 1e-12, u_prev = 0;
    for (int k = 0; k < 10000; ++k) {
      const double t = k * dt;
      const double u = 5 * std::sin(1.3 * t) + 2 * std::sin(4.1 * t) + 1;
      const double y = plant.output(x, u);
      const double lag = plant.D * (u - u_prev);
      worst = std::max(worst, std::abs(y - theta.dot(s.omega) - lag));
      u_prev = u;
      scale = std::max(scale, std::abs(y));
      s = regressor_step(s, f, u, y, dt);
      x = euler_step(plant, x, u, dt);
    }
    EXPECT_LT(worst / scale, 1e-9) << "trial " << trial;
  }
}

TEST(Regressor, FloatInstantiation) {
  const auto f = make_lambda_filter<float>({15.f, 45.f});
  auto s = make_regressor_state(f, 1);
  s = regressor_step(s, f, 1.f, 0.f, 1e-3f);
  EXPECT_GT(s.omega(0) + s.omega(1), 0.f);
}
