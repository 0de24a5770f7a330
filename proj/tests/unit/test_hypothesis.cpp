#include <gtest/gtest.h>

#include <cmath>

#include "ckt/covariance.hpp"
#include "ckt/error.hpp"
#include "ckt/hypothesis.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ckt;

TEST(Contrast, TwoBoxes) {
  const auto t = ContrastMatrix::default_contrast(2).matrix();
  ASSERT_EQ(t.rows(), 1);
  EXPECT_EQ(t(0, 0), 1.0);
  EXPECT_EQ(t(0, 1), -1.0);
}

TEST(Contrast, FourBoxesFirstAgainstEachOther) {
  Eigen::MatrixXd expect(3, 4);
  expect << 1, -1, 0, 0,
            1, 0, -1, 0,
            1, 0, 0, -1;
  EXPECT_EQ(ContrastMatrix::default_contrast(4).matrix(), expect);
}

TEST(Contrast, FiveBoxesFullRank) {
  const auto t = ContrastMatrix::default_contrast(5).matrix();
  EXPECT_EQ(t.rows(), 4);
  EXPECT_EQ(t.cols(), 5);
  EXPECT_EQ(oracle::rank(t), 4u);
  EXPECT_EQ(matrix_rank(t), 4u);
}

TEST(Contrast, OneBoxIsRejected) {
  EXPECT_THROW(ContrastMatrix::default_contrast(1), Error);
}

TEST(Contrast, ExtendedSinglePairIsDefault) {
  EXPECT_EQ(ContrastMatrix::extended(6, 2).matrix(), ContrastMatrix::default_contrast(6).matrix());
}

TEST(Contrast, ExtendedBlockDiagonal) {
  const auto t = ContrastMatrix::extended(2, 3).matrix();
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 6);
  for (int b = 0; b < 3; ++b) {
    expect(b, 2 * b) = 1;
    expect(b, 2 * b + 1) = -1;
  }
  EXPECT_EQ(t, expect);
  const auto t49 = ContrastMatrix::extended(4, 3).matrix();
  EXPECT_EQ(t49.rows(), 9);
  EXPECT_EQ(oracle::rank(t49), 9u);
}

TEST(Contrast, ValidatesEntriesAndRank) {
  Eigen::MatrixXd bad(1, 3);
  bad << 1, 1, 0;
  EXPECT_THROW(ContrastMatrix{bad}, Error);
  Eigen::MatrixXd dependent(3, 3);
  dependent << 1, -1, 0,
               0, 1, -1,
               1, 0, -1;
  EXPECT_THROW(ContrastMatrix{dependent}, Error);
}

TEST(Wald, EqualTausGiveZeroAndPValueOne) {
  const Eigen::VectorXd tau = Eigen::VectorXd::Constant(4, 0.37);
  const Eigen::MatrixXd delta = Eigen::MatrixXd::Identity(4, 4);
  const double w = wald_quadratic_form(500, tau, delta, ContrastMatrix::default_contrast(4).matrix());
  EXPECT_NEAR(w, 0.0, 1e-20);
  EXPECT_DOUBLE_EQ(chisq_survival(w, 3), 1.0);
}

TEST(Wald, HandBuiltQuadraticForm) {
  Eigen::VectorXd tau(3);
  tau << 0.5, 0.3, 0.1;
  const Eigen::MatrixXd delta = Eigen::Vector3d(1, 2, 4).asDiagonal();
  // T Delta T' = [[3, 1], [1, 5]], u = (0.2, 0.4): 100 * 0.52 / 14
  const double w = wald_quadratic_form(100, tau, delta, ContrastMatrix::default_contrast(3).matrix());
  EXPECT_NEAR(w, 100.0 * 0.52 / 14.0, 1e-12);
}

TEST(Wald, SingularUnlessRidge) {
  const Eigen::Vector3d v(1, 2, 3);
  const Eigen::MatrixXd delta = v * v.transpose();
  const Eigen::Vector3d tau(0.1, 0.2, 0.4);
  const auto t = ContrastMatrix::default_contrast(3).matrix();
  try {
    wald_quadratic_form(100, tau, delta, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_matrix);
  }
  WaldOptions ridge;
  ridge.ridge = true;
  EXPECT_TRUE(std::isfinite(wald_quadratic_form(100, tau, delta, t, ridge)));
}

TEST(Wald, DegreesOfFreedomForThreeVariablesFiveBoxes) {
  TauEstimates tau;
  tau.n = 1435;
  tau.p = 3;
  tau.m = 5;
  tau.tau.assign(15, 0.2);
  for (std::size_t i = 0; i < 15; ++i) tau.tau[i] += 0.01 * static_cast<double>(i % 5);
  CovarianceEstimate cov;
  cov.delta = Eigen::MatrixXd::Identity(15, 15);
  const TestResult r = wald_statistic(tau, cov, ContrastMatrix::extended(5, 3));
  ASSERT_TRUE(r.df.has_value());
  EXPECT_EQ(*r.df, 12u);
  EXPECT_NEAR(chisq_quantile(0.95, 12), 21.026, 5e-4);
}

TEST(Statistics, TwoBoxExample) {
  const std::vector<double> tau{0.3, 0.1};
  const auto t = ContrastMatrix::default_contrast(2);
  EXPECT_NEAR(stat_inf(100, tau, t), 2.0, 1e-12);
  EXPECT_NEAR(stat_l2(100, tau, t), 4.0, 1e-12);
}

TEST(Statistics, ConstantVectorGivesZero) {
  const std::vector<double> tau(9, -0.2);
  const auto t = ContrastMatrix::extended(3, 3);
  EXPECT_EQ(stat_inf(50, tau, t), 0.0);
  EXPECT_EQ(stat_l2(50, tau, t), 0.0);
}

// Property: both statistics agree with componentwise arithmetic on T tau.
TEST(StatisticsProperty, MatchContrastProduct) {
  gen::Engine e(51);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<std::size_t> md(2, 8), pd(2, 4), nd(5, 5000);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = md(e), p = pd(e), n = nd(e);
    const auto t = ContrastMatrix::extended(m, p);
    std::vector<double> tau(t.cols());
    for (auto& v : tau) v = u(e);
    const Eigen::VectorXd w = t.matrix() * Eigen::Map<const Eigen::VectorXd>(tau.data(), static_cast<Eigen::Index>(tau.size()));
    ASSERT_NEAR(stat_inf(n, tau, t), std::sqrt(static_cast<double>(n)) * w.cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_NEAR(stat_l2(n, tau, t), static_cast<double>(n) * w.squaredNorm(), 1e-9);
  }
}

TEST(ChiSquare, Calibration) {
  EXPECT_DOUBLE_EQ(chisq_survival(0.0, 7), 1.0);
  EXPECT_NEAR(chisq_survival(21.026, 12), 0.05, 5e-4);
  EXPECT_NEAR(chisq_survival(3.841, 1), 0.05, 5e-4);
  EXPECT_NEAR(chisq_survival(3.841, 1), oracle::chisq_survival(3.841, 1), 1e-8);
  EXPECT_NEAR(chisq_survival(21.026, 12), oracle::chisq_survival(21.026, 12), 1e-8);
  EXPECT_THROW(chisq_survival(-1.0, 3), Error);
  EXPECT_THROW(chisq_survival(1.0, 0), Error);
}

// Property: survival is decreasing in x, complements the cdf, and inverts the quantile.
TEST(ChiSquareProperty, MonotoneAndComplementary) {
  gen::Engine e(52);
  std::uniform_real_distribution<double> xd(0, 60);
  std::uniform_int_distribution<int> dd(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const double df = dd(e);
    double a = xd(e), b = xd(e);
    if (a > b) std::swap(a, b);
    ASSERT_GE(chisq_survival(a, df), chisq_survival(b, df));
    ASSERT_NEAR(chisq_survival(a, df) + chisq_cdf(a, df), 1.0, 1e-10);
    const double prob = std::uniform_real_distribution<double>(0.01, 0.99)(e);
    ASSERT_NEAR(chisq_cdf(chisq_quantile(prob, df), df), prob, 1e-10);
  }
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : all_methods()) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("nope"), Error);
}
