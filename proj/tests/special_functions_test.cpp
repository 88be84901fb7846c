#include "adnd/special_functions.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

namespace adnd {
namespace {

TEST(Digamma, MatchesBoostAcrossRange) {
  for (double x : {1e-8, 1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 5.99, 6.0, 10.0, 123.4, 1e5, 1e12}) {
    const double expected = boost::math::digamma(x);
    EXPECT_NEAR(digamma(x), expected, 1e-13 * std::max(1.0, std::abs(expected))) << "x=" << x;
  }
}

TEST(Digamma, KnownValues) {
  const double euler_gamma = 0.57721566490153286061;
  EXPECT_NEAR(digamma(1.0), -euler_gamma, 1e-15);
  EXPECT_NEAR(digamma(2.0) - digamma(1.0), 1.0, 1e-15);
  EXPECT_NEAR(digamma(0.5), -euler_gamma - 2.0 * std::log(2.0), 1e-14);
}

TEST(Digamma, RejectsNonPositive) {
  EXPECT_THROW(digamma(0.0), std::domain_error);
  EXPECT_THROW(digamma(-1.5), std::domain_error);
  EXPECT_THROW(digamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(Digamma, CoefficientWiseOverMatrices) {
  Eigen::Matrix2d m;
  m << 1.0, 2.0, 0.5, 40.0;
  const Eigen::Matrix2d d = digamma(m);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(d.data()[i], digamma(m.data()[i]));
}

TEST(Digamma, FloatInstantiation) {
  EXPECT_NEAR(digamma(3.0f), static_cast<float>(boost::math::digamma(3.0)), 1e-6f);
}

TEST(LogSumExp, HandlesLargeMagnitudes) {
  Eigen::Vector3d x(1000.0, 1000.0, -1000.0);
  EXPECT_NEAR(log_sum_exp(x), 1000.0 + std::log(2.0), 1e-12);
  Eigen::Vector2d y(-800.0, -800.0);
  EXPECT_NEAR(log_sum_exp(y), -800.0 + std::log(2.0), 1e-12);
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::Vector2d z(-inf, -inf);
  EXPECT_EQ(log_sum_exp(z), -inf);
}

TEST(ExpNormalize, RowsAreSimplexWithoutOverflow) {
  Eigen::MatrixXd m(2, 3);
  m << 1e4, 1e4 - 1.0, 0.0, -3.0, -3.0, -3.0;
  exp_normalize_rows(m);
  for (int r = 0; r < 2; ++r) EXPECT_NEAR(m.row(r).sum(), 1.0, 1e-15);
  EXPECT_NEAR(m(0, 0) / m(0, 1), std::exp(1.0), 1e-12);
  EXPECT_NEAR(m(1, 2), 1.0 / 3.0, 1e-15);
}

TEST(LogMultivariateBeta, TwoDimensionalMatchesBetaFunction) {
  Eigen::Vector2d a(2.0, 3.0);
  // B(2, 3) = 1/12
  EXPECT_NEAR(log_multivariate_beta(a), std::log(1.0 / 12.0), 1e-14);
}

}  // namespace
}  // namespace adnd
