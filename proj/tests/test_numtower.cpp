#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opchain/numtower.hpp"

using namespace opchain;

TEST(ExtReal, RejectsNaN) {
  EXPECT_THROW(ExtReal(std::nan("")), domain_error);
}

TEST(ExtReal, InfinitiesOrderAgainstFiniteValues) {
  EXPECT_LT(ExtReal::neg_inf(), ExtReal(-1e308));
  EXPECT_GT(ExtReal::pos_inf(), ExtReal(1e308));
  EXPECT_TRUE(ExtReal::neg_inf().is_neg_inf());
  EXPECT_FALSE(ExtReal(3.0).is_neg_inf());
}

TEST(ExtExp, BoundaryConventions) {
  EXPECT_EQ(ext_exp(ExtReal::neg_inf()).value(), 0.0);
  EXPECT_EQ(ext_exp(0.0).value(), 1.0);
  EXPECT_DOUBLE_EQ(ext_exp(1.0).value(), 2.718281828459045);
  EXPECT_TRUE(ext_exp(ExtReal::pos_inf()).is_pos_inf());
}

TEST(ExtLog, BoundaryConventions) {
  EXPECT_TRUE(ext_log(0.0).is_neg_inf());
  EXPECT_EQ(ext_log(1.0).value(), 0.0);
  EXPECT_THROW(ext_log(-1.0), domain_error);
  EXPECT_THROW(ext_log(ExtReal::neg_inf()), domain_error);
  EXPECT_TRUE(ext_log(ExtReal::pos_inf()).is_pos_inf());
}

TEST(JoinComplex, RejectsNonFiniteParts) {
  EXPECT_THROW(JoinComplex(std::nan(""), 0.0), domain_error);
  EXPECT_THROW(JoinComplex(0.0, INFINITY), overflow_error);
}

TEST(CxExp, Examples) {
  EXPECT_TRUE(cx_exp(JoinComplex::bottom()).is_zero());
  JoinComplex m1 = cx_exp(JoinComplex(0.0, pi));
  EXPECT_NEAR(m1.re(), -1.0, 1e-15);
  EXPECT_NEAR(m1.im(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(cx_exp(JoinComplex(1.0)).re(), std::numbers::e);
}

TEST(CxLog, Examples) {
  EXPECT_TRUE(cx_log(JoinComplex(0.0)).is_bottom());
  JoinComplex l = cx_log(JoinComplex(-1.0));
  EXPECT_EQ(l.re(), 0.0);
  EXPECT_DOUBLE_EQ(l.im(), pi);
  EXPECT_NEAR(cx_log(JoinComplex(std::numbers::e)).re(), 1.0, 1e-16);
}

TEST(Canonicalize, HalfOpenStrip) {
  JoinComplex a = canonicalize(JoinComplex(1.0, 3.0 * pi));
  EXPECT_EQ(a.re(), 1.0);
  EXPECT_NEAR(a.im(), pi, 1e-15);
  EXPECT_TRUE(canonicalize(JoinComplex::bottom()).is_bottom());
  JoinComplex b = canonicalize(JoinComplex(0.0, -pi));
  EXPECT_DOUBLE_EQ(b.im(), pi);
}

TEST(Distance, ModuloPolicyIgnoresWholeTurns) {
  JoinComplex a(1.0, 0.5), b(1.0, 0.5 + 4.0 * pi);
  EXPECT_GT(distance(a, b), 12.0);
  EXPECT_LT(distance(a, b, BranchPolicy::modulo_2pi), 1e-14);
  EXPECT_EQ(distance(JoinComplex::bottom(), JoinComplex::bottom()), 0.0);
  EXPECT_TRUE(std::isinf(distance(JoinComplex::bottom(), a)));
}

TEST(Tolerance, MixedAbsoluteAndRelative) {
  EXPECT_TRUE(within(1e-13, 0.0, {}));
  EXPECT_TRUE(within(1e-11, 1.0, {}));
  EXPECT_FALSE(within(1e-8, 1.0, {}));
  EXPECT_FALSE(within(1e-11, 0.0, {}));
  EXPECT_TRUE(within(1e-3, 1e7, {}));
}

class NumtowerProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

TEST_F(NumtowerProperties, LogOfExpIsCanonical) {
  for (int i = 0; i < 2000; ++i) {
    JoinComplex z(uniform(-20, 20), uniform(-pi, pi));
    JoinComplex back = cx_log(cx_exp(z));
    EXPECT_NEAR(back.re(), z.re(), 1e-12);
    EXPECT_NEAR(back.im(), canonicalize(z).im(), 1e-12);
  }
}

TEST_F(NumtowerProperties, ExpOfLogIsIdentity) {
  for (int i = 0; i < 2000; ++i) {
    JoinComplex z(uniform(-50, 50), uniform(-50, 50));
    JoinComplex back = cx_exp(cx_log(z));
    EXPECT_LE(std::abs(back.value() - z.value()), 1e-12 * std::abs(z.value()));
  }
}

TEST_F(NumtowerProperties, RealRoundTrip) {
  EXPECT_TRUE(ext_log(ext_exp(ExtReal::neg_inf())).is_neg_inf());
  for (int i = 0; i < 2000; ++i) {
    double x = uniform(-700, 700);
    EXPECT_NEAR(ext_log(ext_exp(x)).value(), x, 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_F(NumtowerProperties, PolicyOnlyChangesTheSheet) {
  for (int i = 0; i < 500; ++i) {
    JoinComplex z(uniform(-5, 5), uniform(-30, 30));
    JoinComplex c = apply_policy(z, BranchPolicy::principal);
    EXPECT_GT(c.im(), -pi);
    EXPECT_LE(c.im(), pi);
    EXPECT_LT(distance(c, z, BranchPolicy::modulo_2pi), 1e-13);
    EXPECT_EQ(apply_policy(z, BranchPolicy::modulo_2pi).im(), z.im());
  }
}
