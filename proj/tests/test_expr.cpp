#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "opchain/expr.hpp"

using namespace opchain;
namespace e = opchain::ex;

namespace {

// Random trees drawn from the shapes the parser can produce. Complex
// constants with both parts nonzero are excluded: the language writes them
// as sums.
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

  Expr tree(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(9)) {
      case 0: return e::neg(tree(depth - 1));
      case 1: return e::apply(static_cast<Fn>(pick(7)), tree(depth - 1));
      case 2: return e::oplus(level(), tree(depth - 1), tree(depth - 1));
      case 3: return e::inv(level(), tree(depth - 1));
      case 4: return e::deriv(level(), tree(depth - 1));
      default: return e::binary(static_cast<BinOp>(pick(6)), tree(depth - 1), tree(depth - 1));
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  int level() { return std::uniform_int_distribution<int>(-8, 8)(rng_); }
  double magnitude() {
    switch (pick(4)) {
      case 0: return static_cast<double>(pick(100));
      case 1: return std::uniform_real_distribution<double>(0.0, 10.0)(rng_);
      case 2: return std::ldexp(1.0 + pick(1000), -pick(60));
      default: return std::exp(std::uniform_real_distribution<double>(-300.0, 300.0)(rng_));
    }
  }

  Expr leaf() {
    static const char* names[] = {"x", "y", "z", "a", "b", "n", "w2", "alpha"};
    switch (pick(9)) {
      case 0:
      case 1:
      case 2: return e::var(names[pick(8)]);
      case 3: return e::num(magnitude());
      case 4: return e::num(-magnitude());
      case 5: return e::num(0.0, (pick(2) ? 1.0 : -1.0) * (1.0 + magnitude()));
      case 6: return e::num(pick(2) ? std::numbers::e : std::numbers::pi);
      case 7: return e::num(0.0, 1.0);
      default: return e::bottom();
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST(Parse, PolynomialPrecedence) {
  Expr want = e::join(e::add(e::var("a"), e::mul(e::var("n"), e::var("z"))), e::var("b"));
  EXPECT_EQ(parse("a + n*z \\/ b"), want);
  Expr full = e::join(e::add(e::var("a"), e::mul(e::var("n"), e::var("z"))), e::add(e::var("b"), e::var("z")));
  EXPECT_EQ(parse("a+n*z \\/ b+z"), full);
}

TEST(Parse, JoinSpellings) {
  Expr want = e::join(e::var("x"), e::var("y"));
  EXPECT_EQ(parse("x \\/ y"), want);
  EXPECT_EQ(parse("x v y"), want);
  EXPECT_EQ(parse("x \xE2\x88\xA8 y"), want);
}

TEST(Parse, SpecExamples) {
  EXPECT_EQ(parse("x \\/ -inf"), e::join(e::var("x"), e::bottom()));
  EXPECT_EQ(parse("D[-1](z^2)"), e::deriv(-1, e::pow(e::var("z"), e::num(2.0))));
  EXPECT_EQ(parse("oplus[2](e^2, e^3)"),
            e::oplus(2, e::pow(e::num(std::numbers::e), e::num(2.0)), e::pow(e::num(std::numbers::e), e::num(3.0))));
  EXPECT_EQ(parse("inv[-1](z)"), e::inv(-1, e::var("z")));
}

TEST(Parse, Literals) {
  EXPECT_EQ(parse("3i"), e::num(0.0, 3.0));
  EXPECT_EQ(parse("i"), e::num(0.0, 1.0));
  EXPECT_EQ(parse("2 + 3i"), e::add(e::num(2.0), e::num(0.0, 3.0)));
  EXPECT_EQ(parse("-2.5"), e::num(-2.5));
  EXPECT_EQ(parse("1.5e3"), e::num(1500.0));
  EXPECT_EQ(parse("pi"), e::num(std::numbers::pi));
}

TEST(Parse, PowerIsRightAssociativeAndUnaryBindsTighter) {
  Expr x = e::var("x");
  EXPECT_EQ(parse("x^2^3"), e::pow(x, e::pow(e::num(2.0), e::num(3.0))));
  EXPECT_EQ(parse("-x^2"), e::pow(e::neg(x), e::num(2.0)));
  EXPECT_EQ(parse("2^-1"), e::pow(e::num(2.0), e::num(-1.0)));
  EXPECT_EQ(parse("a - b - c"), e::sub(e::sub(e::var("a"), e::var("b")), e::var("c")));
}

TEST(Parse, Errors) {
  auto fails_at = [](const char* text, std::size_t pos) {
    try {
      parse(text);
      ADD_FAILURE() << "no error for " << text;
    } catch (const parse_error& err) {
      EXPECT_EQ(err.position(), pos) << text << ": " << err.what();
      EXPECT_LE(err.position(), std::string(text).size());
    }
  };
  fails_at("2z", 1);          // implicit multiplication
  fails_at("(1 + 2", 6);      // unclosed paren
  fails_at("1 +", 3);         // missing operand
  fails_at("inf", 0);         // only -inf is a literal
  fails_at("oplus[9](1, 2)", 6);
  fails_at("D[1.5](z)", 2);
  fails_at("exp 2", 4);
  fails_at("x $ y", 2);
  EXPECT_THROW(parse(""), parse_error);
}

TEST(Print, SpecExamples) {
  EXPECT_EQ(to_string(e::join(e::add(e::var("a"), e::var("z")), e::var("b"))), "a + z \\/ b");
  EXPECT_EQ(to_string(e::pow(e::var("z"), e::num(2.0))), "z^2");
  EXPECT_EQ(to_string(e::join(e::var("z"), e::neg(e::var("z")))), "z \\/ -z");
}

TEST(Print, ParenthesesWhereNeeded) {
  Expr a = e::var("a"), b = e::var("b"), c = e::var("c");
  EXPECT_EQ(to_string(e::mul(e::add(a, b), c)), "(a + b)*c");
  EXPECT_EQ(to_string(e::sub(a, e::sub(b, c))), "a - (b - c)");
  EXPECT_EQ(to_string(e::pow(e::pow(a, b), c)), "(a^b)^c");
  EXPECT_EQ(to_string(e::add(a, e::join(b, c))), "a + (b \\/ c)");
  EXPECT_EQ(to_string(e::neg(e::num(2.0))), "-(2)");
  EXPECT_EQ(to_string(e::num(-2.0)), "-2");
}

TEST(RoundTrip, ThousandRandomTrees) {
  TreeGen gen(12345);
  for (int i = 0; i < 1000; ++i) {
    Expr t = gen.tree(8);
    std::string text = to_string(t);
    Expr back = parse(text);
    ASSERT_EQ(back, t) << text;
    EXPECT_EQ(to_string(back), text);
  }
}

TEST(Variables, FreeAndDefault) {
  Expr f = parse("a*exp(b*z) + log(z)");
  EXPECT_EQ(free_variables(f), (std::set<std::string>{"a", "b", "z"}));
  EXPECT_EQ(default_variable(f), "z");
  EXPECT_EQ(default_variable(parse("t^2 + 1")), "t");
  EXPECT_EQ(default_variable(parse("x*y")), "x");
  EXPECT_EQ(default_variable(parse("3")), "z");
  EXPECT_TRUE(depends_on(f, "b"));
  EXPECT_FALSE(depends_on(f, "x"));
}
