#include "mre/estimator.hpp"
#include "mre/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mre;

TEST(Estimator, InitialState) {
  const auto s = make_estimator<double>(4, 1.0, 2.0);
  EXPECT_EQ(s.theta_hat, VectorXd::Zero(4));
  EXPECT_EQ(s.Gamma, 2.0 * MatrixXd::Identity(4, 4));
}

TEST(Estimator, ParameterErrorOfZeroEstimate) {
  const Eigen::Vector4d theta(4, 1, -44, -11);
  EXPECT_NEAR(parameter_error<double>(VectorXd::Zero(4), theta), std::sqrt(2074.0), 1e-12);
  EXPECT_NEAR(parameter_error<double>(VectorXd::Zero(4), theta), 45.54, 1e-2);
  EXPECT_THROW(parameter_error<double>(VectorXd::Zero(3), theta), Error);
}

TEST(Estimator, DimensionMismatch) {
  auto s = make_estimator<double>(3, 1.0);
  const auto ext = make_extended_regression<double>(4, 1.0);
  EXPECT_THROW(rls_mre_step(s, ext, 1e-3), Error);
}

TEST(Estimator, ZeroExcitationGammaGrowsExponentially) {
  auto s = make_estimator<double>(2, 1.0);
  const auto ext = make_extended_regression<double>(2, 1.0);
  for (int k = 0; k < 1000; ++k) s = rls_mre_step(s, ext, 1e-3);
  EXPECT_NEAR(s.Gamma(0, 0), std::exp(1.0), 2e-3);
  EXPECT_EQ(s.theta_hat, VectorXd::Zero(2));
}

TEST(Estimator, ScalarGammaFixedPoint) {
  // Ω held at 0.5: Γ → λ/Ω² = 4
  auto s = make_estimator<double>(1, 1.0);
  auto ext = make_extended_regression<double>(1, 1.0);
  ext.Omega(0, 0) = 0.5;
  ext.Upsilon(0) = 0.5 * 3.0;
  for (int k = 0; k < 30000; ++k) s = rls_mre_step(s, ext, 1e-3);
  EXPECT_NEAR(s.Gamma(0, 0), 4.0, 0.04);
  EXPECT_NEAR(s.theta_hat(0), 3.0, 1e-6);
}

TEST(Estimator, GammaStaysSymmetricPositive) {
  auto s = make_estimator<double>(3, 2.0);
  auto ext = make_extended_regression<double>(3, 1.0);
  ext.Omega << 2, 0.5, 0, 0.5, 1, 0.1, 0, 0.1, 0.3;
  for (int k = 0; k < 5000; ++k) {
    s = rls_mre_step(s, ext, 1e-3);
    ASSERT_TRUE(is_symmetric(s.Gamma));
  }
  EXPECT_GT(lambda_min(s.Gamma), 0);
}

TEST(Estimator, LostPositivityIsReported) {
  auto s = make_estimator<double>(1, 1.0);
  s.pd_check_every = 1;
  auto ext = make_extended_regression<double>(1, 1.0);
  ext.Omega(0, 0) = 100.0;
  try {
    for (int k = 0; k < 10; ++k) s = rls_mre_step(s, ext, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GammaLostPositivity);
  }
}

TEST(Estimator, OdeMatchesClosedFormOnScalarRun) {
  auto ext = make_extended_regression<double>(1, 2.0);
  auto est = make_estimator<double>(1, 1.0, 1.0);
  std::vector<MatrixXd> Om;
  std::vector<VectorXd> Up;
  const double dt = 1e-4;
  for (int k = 0; k < 150000; ++k) {
    const double t = k * dt;
    VectorXd w(1);
    w << 2.0 + std::cos(0.7 * t);
    const double y = -1.5 * w(0) + 0.3 * std::sin(4.0 * t);
    Om.push_back(ext.Omega);
    Up.push_back(ext.Upsilon);
    est = rls_mre_step(est, ext, dt);
    ext = mre_step(ext, w, y, dt);
  }
  Om.push_back(ext.Omega);
  Up.push_back(ext.Upsilon);
  const VectorXd ls = oracle::weighted_ls(Om, Up, 1.0, dt);
  EXPECT_LT(std::abs(est.theta_hat(0) - ls(0)) / std::abs(ls(0)), 1e-4);
}

TEST(Gradient, ConvergesUnderRichRegressor) {
  auto s = make_baseline<double>(2, 5.0);
  const Eigen::Vector2d theta(1, -2);
  const double dt = 1e-3;
  for (int k = 0; k < 100000; ++k) {
    const double t = k * dt;
    const Eigen::Vector2d w(std::sin(t), std::cos(2 * t));
    s = gradient_step<double>(s, w, theta.dot(w), dt);
  }
  EXPECT_LT((s.theta_hat - theta).norm(), 1e-3);
  EXPECT_THROW(gradient_step<double>(s, VectorXd::Ones(3), 0.0, dt), Error);
}

TEST(IntegratorPi, ExplicitDivergesWhereImplicitConverges) {
  // Ω grows without bound under β = 0; once dt·λ_max(ΓΩ²) > 2 the explicit
  // step is unstable
  auto ext = make_extended_regression<double>(2, 0.0);
  const Eigen::Vector2d theta(2, -1);
  auto impl = make_baseline<double>(2, 1.0);
  auto expl = make_baseline<double>(2, 1.0);
  const double dt = 1e-2;
  for (int k = 0; k < 3000; ++k) {
    const double t = k * dt;
    const Eigen::Vector2d w(1.0 + std::sin(t), 1.0);
    impl = integrator_pi_step(impl, ext, dt);
    expl = integrator_pi_step(expl, ext, dt, StepScheme::Explicit);
    ext = mre_step<double>(ext, w, theta.dot(w), dt);
  }
  EXPECT_LT((impl.theta_hat - theta).norm(), 1e-6);
  EXPECT_FALSE(std::isfinite((expl.theta_hat - theta).norm()) && (expl.theta_hat - theta).norm() < 1.0);
}
