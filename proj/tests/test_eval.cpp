#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "opchain/opchain.hpp"

using namespace opchain;

namespace {

JoinComplex ev(const std::string& text, const Env& env = {}, EvalOptions opts = {}) {
  return eval(parse(text), env, opts);
}

EvalOptions real_mode() { return EvalOptions{Mode::real, BranchPolicy::principal, {}}; }

}  // namespace

TEST(Eval, SpecExamples) {
  EXPECT_DOUBLE_EQ(ev("0 \\/ 0").re(), std::numbers::ln2);
  EXPECT_NEAR(ev("1 \\/ 2").re(), 2.3132616875182228, 1e-15);
  JoinComplex z(1.0, 1.0);
  EXPECT_LT(distance(ev("D[-1](exp(z))", {{"z", z}}), cx_exp(z)), 1e-13);
  EXPECT_NEAR(ev("oplus[2](e^2, e^3)").re(), std::exp(6.0), 1e-12 * std::exp(6.0));
  EXPECT_EQ(ev("x \\/ -inf", {{"x", JoinComplex(7.0)}}).re(), 7.0);
}

TEST(Eval, ComplexLiteralsAndFunctions) {
  JoinComplex v = ev("2 + 3i");
  EXPECT_EQ(v.re(), 2.0);
  EXPECT_EQ(v.im(), 3.0);
  EXPECT_NEAR(ev("exp(i*pi)").re(), -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(ev("log(-1)").im(), std::numbers::pi);
  EXPECT_NEAR(ev("cosh(1)^2 - sinh(1)^2").re(), 1.0, 1e-14);
  EXPECT_TRUE(ev("0 \\/ inv[-1](0)").is_bottom());
}

TEST(Eval, BottomArithmetic) {
  EXPECT_TRUE(ev("-inf + 3").is_bottom());
  EXPECT_TRUE(ev("2 * -inf").is_bottom());
  EXPECT_TRUE(ev("log(0)").is_bottom());
  EXPECT_TRUE(ev("exp(-inf)").is_zero());
  EXPECT_THROW(ev("-1 * -inf"), undefined_form);
  EXPECT_THROW(ev("1 / 0"), domain_error);
}

TEST(Eval, RealModeDomainRules) {
  EXPECT_THROW(ev("log(-1)", {}, real_mode()), domain_error);
  EXPECT_THROW(ev("(-8)^0.5", {}, real_mode()), domain_error);
  EXPECT_THROW(ev("3i", {}, real_mode()), domain_error);
  EXPECT_EQ(ev("(-2)^3", {}, real_mode()).re(), -8.0);
  EXPECT_TRUE(ev("log(0)", {}, real_mode()).is_bottom());
  EXPECT_THROW(ev("oplus[2](-1, 3)", {}, real_mode()), domain_error);
  EXPECT_TRUE(eval_real(parse("exp(1000)"), {}).is_pos_inf());
  EXPECT_THROW(ev("exp(1000)", {}, real_mode()), overflow_error);
}

TEST(Eval, UnboundVariableNamesTheIdentifier) {
  try {
    ev("a + z", {{"z", JoinComplex(1.0)}});
    FAIL();
  } catch (const unbound_variable& e) {
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
}

TEST(Eval, LevelBoundsComeFromOptions) {
  EXPECT_THROW(ev("oplus[5](1, 2)"), level_error);
  EvalOptions wide{Mode::complex, BranchPolicy::principal, LevelBounds{-8, 8}};
  EXPECT_NO_THROW(ev("oplus[-5](-3, -2)", {}, wide));
}

TEST(Eval, BranchPolicyAffectsOnlyTheSheet) {
  EvalOptions modulo{Mode::complex, BranchPolicy::modulo_2pi, {}};
  Env env{{"z", JoinComplex(0.5, 3.0)}};
  JoinComplex p = ev("log(exp(z))", env);
  JoinComplex m = ev("log(exp(z))", env, modulo);
  EXPECT_LT(distance(p, m, BranchPolicy::modulo_2pi), 1e-14);
  EXPECT_LE(p.im(), std::numbers::pi);
}

TEST(Eval, IsPure) {
  Expr f = parse("a*exp(b*z) \\/ log(z)");
  Env env{{"a", JoinComplex(0.3)}, {"b", JoinComplex(1.1, 0.2)}, {"z", JoinComplex(2.0, -1.0)}};
  Env copy = env;
  JoinComplex first = eval(f, env);
  EXPECT_EQ(eval(f, env), first);
  EXPECT_EQ(env, copy);
}

TEST(Eval, DerivativeNodesInRealMode) {
  Env env{{"z", JoinComplex(2.0)}};
  EXPECT_NEAR(ev("D[0](z^3)", env, real_mode()).re(), 12.0, 1e-12);
  EXPECT_NEAR(ev("D[-1](z^2)", {{"z", JoinComplex(1.0)}}, real_mode()).re(), std::numbers::ln2, 1e-15);
}
