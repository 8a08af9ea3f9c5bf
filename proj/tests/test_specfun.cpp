#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "latentrd/errors.hpp"
#include "latentrd/specfun.hpp"
#include "oracle_util.hpp"

namespace {

using namespace latentrd;
using latentrd::testing::Big;
using latentrd::testing::to_double;

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

TEST(LogGamma, MatchesFiftyDigitReference) {
  for (double x : {1e-4, 0.01, 0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 7.25, 10.0, 33.3, 1e3, 123456.7, 1e6}) {
    const double want = to_double(latentrd::testing::big_lgamma(Big(x)));
    EXPECT_LT(rel_err(specfun::log_gamma(x), want), 1e-12) << "x=" << x;
  }
}

TEST(LogGamma, ExactZerosAndErrorBound) {
  EXPECT_EQ(specfun::log_gamma(1.0), 0.0);
  EXPECT_EQ(specfun::log_gamma(2.0), 0.0);
  for (double x : {0.5, 3.7, 50.0}) {
    const auto r = specfun::log_gamma_result(x);
    EXPECT_LE(r.abs_error_bound, 1e-10);
    EXPECT_LE(std::abs(r.value - to_double(latentrd::testing::big_lgamma(Big(x)))), r.abs_error_bound + 1e-13);
  }
  EXPECT_THROW(specfun::log_gamma(0.0), DomainError);
  EXPECT_THROW(specfun::log_gamma(-1.5), DomainError);
}

TEST(Digamma, MatchesFiftyDigitReference) {
  for (double x : {0.01, 0.25, 0.5, 1.0, 2.0, 3.5, 9.99, 10.0, 77.0, 1e4, 1e6}) {
    const double want = to_double(latentrd::testing::big_digamma(Big(x)));
    EXPECT_NEAR(specfun::digamma(x), want, 1e-12 * std::max(1.0, std::abs(want))) << "x=" << x;
  }
}

TEST(Digamma, ClassicalValues) {
  EXPECT_NEAR(specfun::digamma(1.0), -0.57721566490153286, 1e-14);
  EXPECT_NEAR(specfun::digamma(0.5), -0.57721566490153286 - 2.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(specfun::multivariate_digamma(1, 1.0), -specfun::kEulerGamma, 1e-14);
}

TEST(BinaryEntropy, Values) {
  EXPECT_NEAR(specfun::binary_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_EQ(specfun::binary_entropy(0.0), 0.0);
  EXPECT_EQ(specfun::binary_entropy(1.0), 0.0);
  const double want = to_double(latentrd::testing::big_binary_entropy(Big("0.11")));
  EXPECT_NEAR(specfun::binary_entropy(0.11), want, 1e-15);
  EXPECT_THROW(specfun::binary_entropy(-0.01), DomainError);
  EXPECT_THROW(specfun::binary_entropy(1.01), DomainError);
}

TEST(BinaryEntropy, SymmetricAndConcave) {
  for (int i = 1; i < 200; ++i) {
    const double p = i / 200.0;
    EXPECT_NEAR(specfun::binary_entropy(p), specfun::binary_entropy(1.0 - p), 1e-15);
    if (i > 1 && i < 199) {
      const double h = 1e-3;
      EXPECT_LE(specfun::binary_entropy(p + h) - 2 * specfun::binary_entropy(p) + specfun::binary_entropy(p - h),
                1e-10);
    }
  }
}

TEST(MultivariateLogGamma, Examples) {
  EXPECT_EQ(specfun::multivariate_log_gamma(1, 2.0), 0.0);
  EXPECT_NEAR(specfun::multivariate_log_gamma(2, 1.5), std::log(std::numbers::pi / 2.0), 1e-14);
  EXPECT_THROW(specfun::multivariate_log_gamma(3, 1.0), DomainError);
  EXPECT_THROW(specfun::multivariate_log_gamma(0, 1.0), DomainError);
}

TEST(MultivariateLogGamma, MatchesProductFormulaAndRecursion) {
  for (int n = 1; n <= 10; ++n)
    for (double a : {0.5 * n + 0.5, 0.5 * n + 1.25, 0.5 * n + 7.0, 40.0 + n}) {
      const double want = to_double(latentrd::testing::big_mv_lgamma(n, Big(a)));
      EXPECT_LT(rel_err(specfun::multivariate_log_gamma(n, a), want), 1e-12) << n << " " << a;
      if (n >= 2) {
        const double rhs = 0.5 * (n - 1) * specfun::kLogPi + specfun::log_gamma(a) +
                           specfun::multivariate_log_gamma(n - 1, a - 0.5);
        EXPECT_NEAR(specfun::multivariate_log_gamma(n, a), rhs, 1e-10);
      }
    }
}

TEST(MultivariateLogGamma, LogConvexInA) {
  for (int n : {1, 3, 7})
    for (double a = 0.5 * n + 0.1; a < 30.0; a += 0.37) {
      const double h = 1e-2;
      const double second = specfun::multivariate_log_gamma(n, a + h) - 2 * specfun::multivariate_log_gamma(n, a) +
                            specfun::multivariate_log_gamma(n, a - h);
      EXPECT_GE(second, -1e-10);
    }
}

TEST(MultivariateDigamma, MatchesReferenceAndFiniteDifference) {
  for (int n : {1, 2, 5, 10})
    for (double a : {0.5 * n + 0.3, 0.5 * n + 4.0, 100.0}) {
      const double want = to_double(latentrd::testing::big_mv_digamma(n, Big(a)));
      EXPECT_NEAR(specfun::multivariate_digamma(n, a), want, 1e-11 * std::max(1.0, std::abs(want)));
      const double h = 1e-5;
      const double fd =
          (specfun::multivariate_log_gamma(n, a + h) - specfun::multivariate_log_gamma(n, a - h)) / (2 * h);
      EXPECT_NEAR(fd, specfun::multivariate_digamma(n, a), 1e-6);
    }
  EXPECT_THROW(specfun::multivariate_digamma(2, 0.5), DomainError);
}

TEST(Sandwiches, DigammaAndStirlingOnGrid) {
  for (int i = 0; i < 2000; ++i) {
    const double x = std::pow(10.0, -2.0 + 8.0 * i / 1999.0);
    const double psi = specfun::digamma(x);
    EXPECT_LT(psi, std::log(x));
    EXPECT_GT(psi, std::log(x) - 1.0 / x);
    const double xs = std::pow(10.0, -4.0 + 10.0 * i / 1999.0);
    EXPECT_GE(specfun::log_gamma(xs + 0.5), xs * std::log(xs + 0.5) - xs - 0.5 + specfun::kHalfLogTwoPi);
  }
  EXPECT_GE(specfun::log_gamma(0.5), -0.5 + specfun::kHalfLogTwoPi);
}

}  // namespace
