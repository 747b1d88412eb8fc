#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opchain/joinalg.hpp"
#include "oracles.hpp"

using namespace opchain;

TEST(LogBinomial, Examples) {
  EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-15);
  EXPECT_EQ(log_binomial(9, 0), 0.0);
  EXPECT_NEAR(log_binomial(10, 5), std::log(252.0), 1e-14);
  EXPECT_THROW(log_binomial(3, 4), domain_error);
  EXPECT_THROW(log_binomial(3, -1), domain_error);
}

TEST(LogBinomial, MatchesExactIntegersUpTo60) {
  for (unsigned n = 0; n <= 60; ++n)
    for (unsigned k = 0; k <= n; ++k) {
      double exact = std::log(static_cast<double>(oracle::choose(n, k)));
      EXPECT_LE(std::abs(log_binomial(n, k) - exact), 1e-12 * std::max(1.0, exact)) << n << "," << k;
    }
}

TEST(BinomialRhs, Examples) {
  double x = 0.4, y = -1.3;
  double two = join(join(2 * x, std::numbers::ln2 + x + y), 2 * y).value();
  EXPECT_NEAR(binomial_rhs(2, x, y).value(), two, 1e-15);
  EXPECT_NEAR(binomial_rhs(1, x, y).value(), join(x, y).value(), 1e-15);
  EXPECT_NEAR(binomial_rhs(3, 0.0, 0.0).value(), std::log(8.0), 1e-15);
}

TEST(BinomialRhs, TheoremAgainstBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    double x = u(rng), y = u(rng);
    for (unsigned n = 1; n <= 20; ++n) {
      double lhs = n * join(x, y).value();
      double rhs = binomial_rhs(n, x, y).value();
      double brute = static_cast<double>(oracle::binomial_rhs(n, x, y));
      double scale = std::max({1.0, std::abs(lhs), std::abs(brute)});
      EXPECT_LE(std::abs(lhs - rhs), 1e-9 * scale);
      EXPECT_LE(std::abs(rhs - brute), 1e-12 * scale);
    }
  }
}

TEST(BinomialRhs, LargeDegreeStaysFinite) {
  EXPECT_NEAR(binomial_rhs(5000, 1.0, 1.0).value(), 5000.0 * (1.0 + std::numbers::ln2), 1e-9 * 5000.0);
}

TEST(JoinPolynomial, Examples) {
  JoinComplex c(1.5, -0.5), z(0.2, 0.7);
  JoinPolynomial constant({c, JoinComplex::bottom(), JoinComplex::bottom()});
  EXPECT_EQ(constant.degree(), 0);
  EXPECT_EQ(poly_eval(constant, z), c);
  JoinPolynomial linear({JoinComplex::bottom(), JoinComplex(0.0)});
  EXPECT_LT(distance(poly_eval(linear, z), z), 1e-15);
  JoinPolynomial two({JoinComplex(0.0), JoinComplex(0.0)});
  EXPECT_NEAR(poly_eval(two, JoinComplex(0.0)).re(), std::numbers::ln2, 1e-15);
  JoinPolynomial empty({JoinComplex::bottom()});
  EXPECT_EQ(empty.degree(), -1);
  EXPECT_TRUE(poly_eval(empty, z).is_bottom());
}

TEST(JoinPolynomial, RealValuesAgreeWithLiteralJoin) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<JoinComplex> a;
    for (int k = 0; k < 5; ++k) a.emplace_back(u(rng));
    double z = u(rng);
    long double ref = std::exp(static_cast<long double>(a[0].re()));
    for (int k = 1; k < 5; ++k) ref += std::exp(static_cast<long double>(a[k].re() + k * z));
    JoinComplex p = poly_eval(JoinPolynomial(a), JoinComplex(z));
    EXPECT_NEAR(p.re(), static_cast<double>(std::log(ref)), 1e-13);
    EXPECT_NEAR(p.im(), 0.0, 1e-15);
  }
}

class JoinIdentities : public ::testing::Test {
 protected:
  std::mt19937_64 rng{11};
  double u() { return std::uniform_real_distribution<double>(-3.0, 3.0)(rng); }
  static double close(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }
};

TEST_F(JoinIdentities, ScalarSplitAndSums) {
  for (int i = 0; i < 200; ++i) {
    double x = u(), y = u();
    for (long m = 1; m <= 5; ++m)
      for (long n = 1; n <= 5; ++n) {
        EXPECT_LT(close(nfold_join(m * n, x).value(), nfold_join(m, nfold_join(n, x)).value()), 1e-10);
        EXPECT_LT(close(static_cast<double>(oracle::folded(static_cast<unsigned>(m * n), x)),
                        nfold_join(m * n, x).value()),
                  1e-10);
        EXPECT_LT(close(nfold_join(m, x).value() + nfold_join(n, y).value(),
                        std::log(static_cast<double>(m * n)) + x + y),
                  1e-10);
      }
  }
}

TEST_F(JoinIdentities, Recurrences) {
  for (int i = 0; i < 200; ++i) {
    double m = u(), n = u(), w = u();
    EXPECT_LT(close(join(m, n).value(), join(m - 1, n - 1).value() + 1), 1e-10);
    EXPECT_LT(close(join(m, n).value() + 1, join(m + 1, n + 1).value()), 1e-10);
    EXPECT_LT(close(nfold_join(3, m + n).value() + w, nfold_join(3, m + n + w).value()), 1e-10);
    EXPECT_LT(close(m + n + join(m, n).value(), join(2 * m + n, m + 2 * n).value()), 1e-10);
  }
}

TEST_F(JoinIdentities, TwoCosh) {
  for (int i = 0; i < 500; ++i) {
    double x = 20.0 * u() / 3.0;
    EXPECT_LT(close(join(x, -x).value(), std::log(2.0 * std::cosh(x))), 1e-12);
  }
}
