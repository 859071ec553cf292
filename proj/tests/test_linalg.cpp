#include "mre/linalg.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace mre;

TEST(SymmetricEigenvalues, DiagonalIsSorted) {
  MatrixXd m = Eigen::Vector3d(3, -1, 2).asDiagonal();
  const VectorXd e = symmetric_eigenvalues(m);
  EXPECT_DOUBLE_EQ(e(0), -1);
  EXPECT_DOUBLE_EQ(e(1), 2);
  EXPECT_DOUBLE_EQ(e(2), 3);
}

TEST(SymmetricEigenvalues, TwoByTwo) {
  Eigen::Matrix2d m;
  m << 2, 1, 1, 2;
  const VectorXd e = symmetric_eigenvalues(m);
  EXPECT_NEAR(e(0), 1, 1e-12);
  EXPECT_NEAR(e(1), 3, 1e-12);
}

TEST(SymmetricEigenvalues, MatchesSelfAdjointSolverOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    const MatrixXd s = a + a.transpose();
    const VectorXd ours = symmetric_eigenvalues(s);
    Eigen::SelfAdjointEigenSolver<MatrixXd> ref(s);
    EXPECT_LT((ours - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, s.norm()));
  }
}

TEST(SymmetricEigenvalues, IllConditionedGram) {
  // ω ωᵀ sums with a nearly constant ω, as seen late in a constant-input run
  MatrixXd g = MatrixXd::Zero(4, 4);
  Eigen::Vector4d w(0, 6.67, 0, -1.67);
  g += w * w.transpose();
  g += 1e-9 * MatrixXd::Identity(4, 4);
  Eigen::SelfAdjointEigenSolver<MatrixXd> ref(g);
  const VectorXd ours = symmetric_eigenvalues(g);
  EXPECT_NEAR(ours(0), ref.eigenvalues()(0), 1e-12);
  EXPECT_NEAR(ours(3), ref.eigenvalues()(3), 1e-10);
}

TEST(SymmetricEigenvalues, RejectsNonSquare) {
  EXPECT_THROW(symmetric_eigenvalues(MatrixXd(2, 3)), Error);
}

TEST(SymmetricEigenvalues, WorksForFloat) {
  Eigen::Matrix2f m;
  m << 4, 0, 0, 1;
  const auto e = symmetric_eigenvalues(m);
  EXPECT_FLOAT_EQ(e(0), 1.0f);
  EXPECT_FLOAT_EQ(e(1), 4.0f);
}

TEST(Linalg, NormAndExtremes) {
  Eigen::Matrix2d m;
  m << -5, 0, 0, 2;
  EXPECT_DOUBLE_EQ(lambda_min(m), -5);
  EXPECT_DOUBLE_EQ(lambda_max(m), 2);
  EXPECT_DOUBLE_EQ(symmetric_norm(m), 5);
}

TEST(Linalg, IsSymmetric) {
  Eigen::Matrix2d m;
  m << 1, 2, 2, 1;
  EXPECT_TRUE(is_symmetric(m));
  m(0, 1) += 1e-3;
  EXPECT_FALSE(is_symmetric(m));
  EXPECT_FALSE(is_symmetric(MatrixXd(2, 3)));
}

TEST(Linalg, CompanionCharacteristicPolynomialRoundTrip) {
  // s^3 + 6 s^2 + 11 s + 6 = (s+1)(s+2)(s+3)
  VectorXd c(3);
  c << 6, 11, 6;
  const MatrixXd a = companion<double>(c);
  Eigen::EigenSolver<MatrixXd> es(a);
  std::vector<double> roots;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(es.eigenvalues()(i).imag(), 0, 1e-10);
    roots.push_back(es.eigenvalues()(i).real());
  }
  std::sort(roots.begin(), roots.end());
  EXPECT_NEAR(roots[0], -3, 1e-10);
  EXPECT_NEAR(roots[1], -2, 1e-10);
  EXPECT_NEAR(roots[2], -1, 1e-10);
  EXPECT_TRUE(is_hurwitz(a));
}

TEST(Linalg, HurwitzRejectsMarginalAndUnstable) {
  VectorXd c(2);
  c << 0, 1;  // s^2 + s: root at 0
  EXPECT_FALSE(is_hurwitz(companion<double>(c)));
  c << -1, 1;
  EXPECT_FALSE(is_hurwitz(companion<double>(c)));
}

TEST(Types, ErrorCarriesCode) {
  try {
    throw Error(ErrorCode::NotHurwitz, "x");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHurwitz);
    EXPECT_STREQ(to_string(e.code()), to_string(ErrorCode::NotHurwitz));
  }
}
