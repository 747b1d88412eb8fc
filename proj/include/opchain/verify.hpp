#pragma once

/**
 * @file verify.hpp
 * @brief Seeded property suites over every module: chain laws, the
 *        identity/inverse table, binomial identities, join facts, calculus
 *        identities, partial-derivative identities and the max probe.
 *
 * Errors are measured as |a - b| / max(1, |a|, |b|, s), where s is the
 * magnitude of the operands that fed the computation: relative for large
 * values, absolute below 1.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "chain.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "expr.hpp"
#include "joinalg.hpp"
#include "numtower.hpp"
#include "symbolic.hpp"

namespace opchain::verify {

struct Config {
  long samples = 500;
  std::uint64_t seed = 42;
};

struct PropertyResult {
  std::string suite;
  std::string name;
  double tolerance = 0.0;
  long passed = 0;
  long failed = 0;
  double worst = 0.0;

  bool ok() const { return failed == 0 && passed > 0; }

  void record(double err) {
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    worst = std::max(worst, err);
    if (err <= tolerance) ++passed;
    else ++failed;
  }
  void record(bool holds) { record(holds ? 0.0 : std::numeric_limits<double>::infinity()); }
};

struct Report {
  std::vector<PropertyResult> properties;

  bool all_passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.ok(); });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"laws", "table", "binomial", "joinalg",
                                              "calculus", "partials", "maxlimit"};
  return names;
}

inline double discrepancy(double a, double b, double scale = 0.0) {
  if (std::isinf(a) || std::isinf(b)) return a == b ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b), scale});
}

inline double discrepancy(ExtReal a, ExtReal b, double scale = 0.0) { return discrepancy(a.value(), b.value(), scale); }

inline double discrepancy(const JoinComplex& a, const JoinComplex& b,
                    BranchPolicy policy = BranchPolicy::principal) {
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom() ? 0.0 : std::numeric_limits<double>::infinity();
  return distance(a, b, policy) / std::max({1.0, std::abs(a.value()), std::abs(b.value())});
}

namespace detail {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double real(double lo = -3.0, double hi = 3.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  JoinComplex complex(double lo = -3.0, double hi = 3.0) { return JoinComplex(real(lo, hi), real(lo, hi)); }

  // Re in [0.5, 1.5], |Im| in [0.5, 1.5]: clear of the log branch cut and
  // small enough that e^{e^{f(z)}} stays finite for the calculus panel.
  JoinComplex calculus_point() {
    double im = real(0.5, 1.5);
    return JoinComplex(real(0.5, 1.5), integer(0, 1) ? im : -im);
  }

  // Calls body until it completes without a math_error (at most 1000 tries).
  template <class F>
  void valid(F&& body) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      try {
        body();
        return;
      } catch (const math_error&) {
      }
    }
    throw domain_error("no domain-valid sample found");
  }

 private:
  std::mt19937_64 rng_;
};

inline double mag(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

inline ExtReal op(int n, ExtReal x, ExtReal y) { return oplus(OpLevel(n), x, y); }

inline ExtReal folded_join(long k, ExtReal x) {
  ExtReal acc = x;
  for (long i = 1; i < k; ++i) acc = join(acc, x);
  return acc;
}

// ------------------------------------------------------------------------

inline void laws(Report& r, const Config& cfg, Sampler& rnd) {
  for (int n = -3; n <= 2; ++n) {
    PropertyResult assoc{"laws", "associativity n=" + std::to_string(n), 1e-9};
    PropertyResult comm{"laws", "commutativity n=" + std::to_string(n), 1e-9};
    for (long i = 0; i < cfg.samples; ++i) {
      rnd.valid([&] {
        double x = rnd.real(), y = rnd.real(), w = rnd.real();
        ExtReal lhs = op(n, op(n, x, y), w), rhs = op(n, x, op(n, y, w));
        assoc.record(discrepancy(lhs, rhs, mag({x, y, w})));
      });
      rnd.valid([&] {
        double x = rnd.real(), y = rnd.real();
        comm.record(discrepancy(op(n, x, y), op(n, y, x)));
      });
    }
    r.properties.push_back(assoc);
    r.properties.push_back(comm);
  }
  for (int n = -2; n <= 2; ++n) {
    PropertyResult dist{"laws", "distributivity over n-1, n=" + std::to_string(n), 1e-9};
    for (long i = 0; i < cfg.samples; ++i) {
      rnd.valid([&] {
        double x = rnd.real(), y = rnd.real(), w = rnd.real();
        ExtReal lhs = op(n, x, op(n - 1, y, w));
        ExtReal rhs = op(n - 1, op(n, x, y), op(n, x, w));
        dist.record(discrepancy(lhs, rhs, mag({x, y, w, op(n, x, y).value(), op(n, x, w).value()})));
      });
    }
    r.properties.push_back(dist);
  }
  for (int n = -2; n <= 2; ++n) {
    PropertyResult hom{"laws", "log homomorphism n=" + std::to_string(n), 1e-9};
    for (long i = 0; i < cfg.samples; ++i) {
      rnd.valid([&] {
        double x = rnd.real(1e-3, 3.0), y = rnd.real(1e-3, 3.0);
        ExtReal lhs = ext_log(op(n, x, y));
        ExtReal rhs = op(n - 1, ext_log(x), ext_log(y));
        hom.record(discrepancy(lhs, rhs, mag({std::log(x), std::log(y)})));
      });
    }
    r.properties.push_back(hom);
  }
  PropertyResult ident{"laws", "identity law n in {-1..3}", 1e-9};
  for (int n = -1; n <= 3; ++n) {
    for (long i = 0; i < cfg.samples / 5 + 1; ++i) {
      rnd.valid([&] {
        double x = rnd.real();
        ident.record(discrepancy(op(n, x, identity(OpLevel(n))), ExtReal(x)));
      });
    }
  }
  r.properties.push_back(ident);

  PropertyResult beauty{"laws", "x^(ln y) = y^(ln x)", 1e-9};
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(1e-3, 3.0), y = rnd.real(1e-3, 3.0);
    beauty.record(discrepancy(std::pow(x, std::log(y)), std::pow(y, std::log(x))));
  }
  r.properties.push_back(beauty);

  PropertyResult cx_assoc{"laws", "complex join associativity (mod 2 pi i)", 1e-9};
  PropertyResult log_exp{"laws", "cx_log(cx_exp(z)) = canonicalize(z)", 1e-12};
  PropertyResult exp_log{"laws", "cx_exp(cx_log(z)) = z", 1e-12};
  for (long i = 0; i < cfg.samples; ++i) {
    JoinComplex a = rnd.complex(), b = rnd.complex(), c = rnd.complex();
    cx_assoc.record(discrepancy(cx_join(cx_join(a, b), c), cx_join(a, cx_join(b, c)), BranchPolicy::modulo_2pi));
    JoinComplex z(rnd.real(), rnd.real(-pi, pi));
    std::complex<double> d = cx_log(cx_exp(z)).value() - canonicalize(z).value();
    log_exp.record(std::max(std::abs(d.real()), std::abs(d.imag())));
    exp_log.record(discrepancy(cx_exp(cx_log(a)), a));
  }
  r.properties.push_back(cx_assoc);
  r.properties.push_back(log_exp);
  r.properties.push_back(exp_log);

  PropertyResult real_round{"laws", "ext_log(ext_exp(x)) = x", 1e-12};
  real_round.record(ext_log(ext_exp(ExtReal::neg_inf())).is_neg_inf());
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(-700.0, 700.0);
    real_round.record(discrepancy(ext_log(ext_exp(x)), ExtReal(x)));
  }
  r.properties.push_back(real_round);
}

inline void table(Report& r, const Config& cfg, Sampler& rnd) {
  const double e = std::numbers::e;
  PropertyResult ident{"table", "identity(n) = -inf, 0, 1, e, e^e", 0.0};
  ident.record(identity(OpLevel(-1)).is_neg_inf());
  ident.record(identity(OpLevel(0)).value() == 0.0);
  ident.record(identity(OpLevel(1)).value() == 1.0);
  ident.record(identity(OpLevel(2)).value() == e);
  ident.record(identity(OpLevel(3)).value() == std::exp(e));
  r.properties.push_back(ident);

  for (int n = 0; n <= 3; ++n) {
    PropertyResult inv{"table", "x (+)_n inverse(n,x) = identity(n), n=" + std::to_string(n), 1e-9};
    for (long i = 0; i < cfg.samples; ++i) {
      rnd.valid([&] {
        // At n = 3 the inverse passes through exp(exp(1/lnln x)), which loses
        // every digit as x approaches e from below; stay where lnln x > 0.3.
        double x = n == 3 ? rnd.real(4.0, 12.0) : rnd.real(-3.0, 3.0 + n * 3.0);
        ExtReal xi = inverse(OpLevel(n), x);
        inv.record(discrepancy(op(n, x, xi), identity(OpLevel(n))));
      });
    }
    r.properties.push_back(inv);
  }

  PropertyResult cx_inv{"table", "z v (z + i pi) = Bottom exactly", 0.0};
  for (long i = 0; i < cfg.samples; ++i) {
    JoinComplex z = rnd.complex();
    cx_inv.record(cx_join(z, cx_inverse(OpLevel(-1), z)).is_bottom());
  }
  r.properties.push_back(cx_inv);

  PropertyResult cx_inv_up{"table", "complex z (+)_n ~_n z = identity(n), n=0..2", 1e-9};
  for (long i = 0; i < cfg.samples; ++i) {
    for (int n = 0; n <= 2; ++n) {
      rnd.valid([&] {
        JoinComplex z = rnd.complex();
        // ~_2 z = exp(1/Log z) only round-trips while 1/Log z stays in the
        // principal strip, which excludes a neighbourhood of z = 1.
        if (n == 2 && std::abs((1.0 / std::log(z.value())).imag()) > pi) throw domain_error("off the principal strip");
        JoinComplex zi = cx_inverse(OpLevel(n), z);
        cx_inv_up.record(discrepancy(cx_oplus(OpLevel(n), z, zi), cx_identity(OpLevel(n)), BranchPolicy::modulo_2pi));
      });
    }
  }
  r.properties.push_back(cx_inv_up);

  PropertyResult emn{"table", "e^m (+)_2 e^n = e^(mn)", 1e-12};
  for (int m = -3; m <= 3; ++m)
    for (int n = -3; n <= 3; ++n)
      emn.record(discrepancy(op(2, std::exp(m), std::exp(n)), ExtReal(std::exp(m * n))));
  r.properties.push_back(emn);
}

inline void binomial(Report& r, const Config& cfg, Sampler& rnd) {
  PropertyResult thm{"binomial", "n(x v y) = binomial_rhs(n,x,y), n=1..20", 1e-9};
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(), y = rnd.real();
    for (long n = 1; n <= 20; ++n)
      thm.record(discrepancy(static_cast<double>(n) * join(x, y).value(), binomial_rhs(n, x, y), 20.0 * mag({x, y})));
  }
  r.properties.push_back(thm);

  PropertyResult e8{"binomial", "(mn)_v x = m_v (n_v x)", 1e-10};
  PropertyResult e9{"binomial", "m_v x + n_v y = ln(mn) + x + y", 1e-10};
  PropertyResult e10{"binomial", "m v n = [(m-1) v (n-1)] + 1", 1e-10};
  PropertyResult e11{"binomial", "(m v n) + 1 = (m+1) v (n+1)", 1e-10};
  PropertyResult b2{"binomial", "2(x v y) = 2x v (ln 2 + x + y) v 2y", 1e-10};
  PropertyResult e13{"binomial", "n_v (x+y) + z = n_v (x+y+z)", 1e-10};
  PropertyResult e14{"binomial", "x + y + (x v y) = (2x+y) v (x+2y)", 1e-10};
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(), y = rnd.real(), w = rnd.real();
    long m = rnd.integer(1, 6), n = rnd.integer(1, 6);
    double s = mag({x, y, w}) * 3.0;
    e8.record(discrepancy(folded_join(m * n, x), folded_join(m, folded_join(n, x)), s));
    e9.record(discrepancy(folded_join(m, x).value() + folded_join(n, y).value(),
                    std::log(static_cast<double>(m * n)) + x + y, s));
    e10.record(discrepancy(join(x, y), join(x - 1.0, y - 1.0).value() + 1.0, s));
    e11.record(discrepancy(join(x, y).value() + 1.0, join(x + 1.0, y + 1.0), s));
    b2.record(discrepancy(2.0 * join(x, y).value(), join(join(2.0 * x, std::log(2.0) + x + y), 2.0 * y), s));
    e13.record(discrepancy(folded_join(n, x + y).value() + w, folded_join(n, x + y + w), s));
    e14.record(discrepancy(x + y + join(x, y).value(), join(2.0 * x + y, x + 2.0 * y), s));
  }
  for (auto* p : {&e8, &e9, &e10, &e11, &b2, &e13, &e14}) r.properties.push_back(*p);
}

inline void joinalg(Report& r, const Config& cfg, Sampler& rnd) {
  PropertyResult ln2{"joinalg", "0 v 0 = ln 2", 1e-15};
  ln2.record(std::abs(join(0.0, 0.0).value() - std::numbers::ln2));
  r.properties.push_back(ln2);

  PropertyResult nfold{"joinalg", "n_v x = ln n + x vs folded join, n=1..20", 1e-12};
  for (long i = 0; i < cfg.samples / 10 + 1; ++i) {
    double x = rnd.real();
    for (long k = 1; k <= 20; ++k) nfold.record(discrepancy(nfold_join(k, x), folded_join(k, x), std::abs(x)));
  }
  r.properties.push_back(nfold);

  PropertyResult cosh{"joinalg", "x v -x = ln(2 cosh x), |x| <= 20", 1e-12};
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(-20.0, 20.0);
    cosh.record(discrepancy(join(x, -x), ExtReal(std::log(2.0 * std::cosh(x)))));
  }
  r.properties.push_back(cosh);

  PropertyResult stable{"joinalg", "x v x = x + ln 2 up to |x| = 1e300", 0.0};
  for (double x : {1e300, -1e300, 1e10, 0.0, 1000.0, -1000.0})
    stable.record(join(x, x).value() == x + std::numbers::ln2);
  r.properties.push_back(stable);

  PropertyResult lb{"joinalg", "log_binomial vs exact C(n,k), n <= 60", 1e-12};
  for (long n = 0; n <= 60; ++n) {
    std::uint64_t c = 1;
    for (long k = 0; k <= n; ++k) {
      if (k > 0) c = c * static_cast<std::uint64_t>(n - k + 1) / static_cast<std::uint64_t>(k);
      double exact = std::log(static_cast<double>(c));
      lb.record(discrepancy(log_binomial(n, k), exact));
    }
  }
  r.properties.push_back(lb);

  PropertyResult paren{"joinalg", "poly_eval matches the parenthesized expression", 1e-12};
  for (long i = 0; i < cfg.samples; ++i) {
    long degree = rnd.integer(0, 6);
    std::vector<JoinComplex> coeffs;
    std::string text;
    for (long k = 0; k <= degree; ++k) {
      bool absent = k < degree && rnd.integer(0, 4) == 0;
      JoinComplex a = absent ? JoinComplex::bottom() : rnd.complex();
      coeffs.push_back(a);
      if (absent) continue;
      std::string term = "(" + std::to_string(a.re()) + " + " + std::to_string(a.im()) + "*i)";
      if (k > 0) term += " + " + std::to_string(k) + "*z";
      text += (text.empty() ? "" : " \\/ ") + term;
    }
    // std::to_string rounds, so evaluate the polynomial on the rounded text.
    Expr e = parse(text);
    std::vector<JoinComplex> rounded;
    for (const auto& a : coeffs) {
      if (a.is_bottom()) rounded.push_back(a);
      else rounded.push_back(JoinComplex(std::stod(std::to_string(a.re())), std::stod(std::to_string(a.im()))));
    }
    JoinComplex z = rnd.complex();
    paren.record(discrepancy(poly_eval(JoinPolynomial(rounded), z), eval(e, {{"z", z}}), BranchPolicy::modulo_2pi));
  }
  r.properties.push_back(paren);
}

inline void calculus(Report& r, const Config& cfg, Sampler& rnd) {
  const long points = std::max<long>(10, cfg.samples / 50);
  Context ctx;
  ctx.env["a"] = JoinComplex(0.7, -0.3);
  ctx.env["b"] = JoinComplex(1.3, 0.4);
  const std::vector<std::string> panel{"z", "a + z", "z^2", "z^3", "exp(z)", "log(z)", "a*exp(b*z)"};

  auto sheet = [](int n) { return n <= -1 ? BranchPolicy::modulo_2pi : BranchPolicy::principal; };
  for (int n = -2; n <= 1; ++n) {
    PropertyResult agree{"calculus", "closed vs limit D_" + std::to_string(n), 1e-4};
    for (const auto& text : panel) {
      Expr f = parse(text);
      for (long i = 0; i < points; ++i) {
        JoinComplex z = rnd.calculus_point();
        try {
          JoinComplex closed = n_derivative_closed(OpLevel(n), f, z, ctx);
          DnResult lim = n_derivative_limit(OpLevel(n), f, z, {}, ctx);
          agree.record(discrepancy(closed, lim.value, sheet(n)));
        } catch (const opchain::error&) {
          agree.record(false);
        }
      }
    }
    r.properties.push_back(agree);
  }

  auto D = [&](const Expr& f, const JoinComplex& z) { return vee_derivative(f, z, ctx); };
  PropertyResult sum_rule{"calculus", "D(f v g) = Df v Dg", 1e-9};
  PropertyResult prod_rule{"calculus", "D(f + g) = [f + Dg] v [Df + g]", 1e-9};
  PropertyResult nfold_rule{"calculus", "D(n_v f) = n_v Df", 1e-9};
  PropertyResult exp_family{"calculus", "D(a e^(bz)) = a e^(bz) + (b-1)z + log(ab)", 1e-9};
  PropertyResult d0{"calculus", "f log(D_1 f) / z = f'", 1e-9};
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"z^2", "exp(z)"}, {"z^3", "a + z"}, {"log(z)", "z^2"}, {"exp(z)", "2*z"}};
  for (long i = 0; i < points; ++i) {
    JoinComplex z = rnd.calculus_point();
    std::complex<double> zv = z.value();
    for (const auto& [fs, gs] : pairs) {
      Expr f = parse(fs), g = parse(gs);
      JoinComplex fz = opchain::detail::apply_at(f, z, ctx), gz = opchain::detail::apply_at(g, z, ctx);
      sum_rule.record(discrepancy(D(ex::join(f, g), z), cx_join(D(f, z), D(g, z)), BranchPolicy::modulo_2pi));
      JoinComplex rhs = cx_join(JoinComplex(fz.value() + D(g, z).value()), JoinComplex(D(f, z).value() + gz.value()));
      prod_rule.record(discrepancy(D(ex::add(f, g), z), rhs, BranchPolicy::modulo_2pi));
      long k = rnd.integer(2, 6);
      Expr kf = ex::add(ex::num(std::log(static_cast<double>(k))), f);
      nfold_rule.record(discrepancy(D(kf, z), JoinComplex(std::log(static_cast<double>(k)) + D(f, z).value()),
                              BranchPolicy::modulo_2pi));
    }
    std::complex<double> a = ctx.env["a"].value(), b = ctx.env["b"].value();
    JoinComplex expected(a * std::exp(b * zv) + (b - 1.0) * zv + std::log(a * b));
    exp_family.record(discrepancy(D(parse("a*exp(b*z)"), z), expected, BranchPolicy::modulo_2pi));
    for (const auto& text : panel) {
      Expr f = parse(text);
      JoinComplex fz = opchain::detail::apply_at(f, z, ctx);
      JoinComplex d1 = n_derivative_closed(OpLevel(1), f, z, ctx);
      JoinComplex fp = n_derivative_closed(OpLevel(0), f, z, ctx);
      // Any branch of log D_1 differs by 2 pi i k; take the one nearest z f'/f.
      std::complex<double> l = std::log(d1.value());
      std::complex<double> target = zv * fp.value() / fz.value();
      l.imag(l.imag() + two_pi * std::round((target.imag() - l.imag()) / two_pi));
      d0.record(discrepancy(JoinComplex(fz.value() * l / zv), fp));
    }
  }
  for (auto* p : {&sum_rule, &prod_rule, &nfold_rule, &exp_family, &d0}) r.properties.push_back(*p);

  PropertyResult power{"calculus", "D(z^n) = z^n - z + (n-1) log z + ln n, n=1..8", 1e-9};
  for (long i = 0; i < points; ++i) {
    JoinComplex z = rnd.calculus_point();
    std::complex<double> zv = z.value();
    for (int n = 1; n <= 8; ++n) {
      JoinComplex expected(std::pow(zv, n) - zv + static_cast<double>(n - 1) * std::log(zv) + std::log(n));
      power.record(discrepancy(D(parse("z^" + std::to_string(n)), z), expected, BranchPolicy::modulo_2pi));
    }
  }
  r.properties.push_back(power);

  PropertyResult repeat{"calculus", "D^n(nz) = ln(n!), n=1..6", 1e-9};
  for (int n = 1; n <= 6; ++n) {
    JoinComplex z = rnd.calculus_point();
    repeat.record(discrepancy(repeat_vee_derivative(n, parse(std::to_string(n) + "*z"), z, ctx),
                        JoinComplex(std::lgamma(n + 1.0)), BranchPolicy::modulo_2pi));
  }
  r.properties.push_back(repeat);

  PropertyResult exp_inv{"calculus", "D_n exp = exp, n=-2..1 (closed)", 1e-9};
  PropertyResult exp_probe{"calculus", "D_2 exp = exp (limit probe)", 1e-3};
  for (long i = 0; i < points; ++i) {
    JoinComplex z = rnd.calculus_point();
    Expr f = parse("exp(z)");
    for (int n = -2; n <= 1; ++n)
      exp_inv.record(discrepancy(n_derivative_closed(OpLevel(n), f, z, ctx), cx_exp(z), sheet(n)));
    try {
      exp_probe.record(discrepancy(n_derivative_limit(OpLevel(2), f, z, {}, ctx).value, cx_exp(z)));
    } catch (const opchain::error&) {
      exp_probe.record(false);
    }
  }
  r.properties.push_back(exp_inv);
  r.properties.push_back(exp_probe);
}

inline void partials(Report& r, const Config& cfg, Sampler& rnd) {
  const double h = 1e-4;
  auto J = [](double x, double y) { return join(x, y).value(); };
  PropertyResult sum1{"partials", "[d/dx + d/dy](x v y) = 1", 1e-12};
  PropertyResult lap{"partials", "laplacian(x v y) = 1 - [(d/dx)^2 + (d/dy)^2]", 1e-5};
  PropertyResult mixed_printed{"partials", "d2/dxdy(x v y) = -exp[x + y - (x v y)] (as printed)", 1e-5};
  PropertyResult mixed{"partials", "d2/dxdy(x v y) = -exp[x + y - 2(x v y)]", 1e-5};
  PropertyResult prod{"partials", "[d/dx v d/dy](xy) = x v y", 1e-10};
  PropertyResult sum{"partials", "[d/dx v d/dy](x + y) = 1 + ln 2", 1e-10};
  PropertyResult joinp{"partials", "[d/dx v d/dy](x v y) = softmax pair joined", 1e-10};
  const Expr xy = parse("x*y"), xpy = parse("x + y"), xvy = parse("x \\/ y");
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(), y = rnd.real();
    auto [px, py] = join_partials(x, y);
    sum1.record(std::abs(px + py - 1.0));
    double fxx = (J(x + h, y) - 2.0 * J(x, y) + J(x - h, y)) / (h * h);
    double fyy = (J(x, y + h) - 2.0 * J(x, y) + J(x, y - h)) / (h * h);
    lap.record(std::abs(fxx + fyy - (1.0 - (px * px + py * py))));
    double fxy = (J(x + h, y + h) - J(x + h, y - h) - J(x - h, y + h) + J(x - h, y - h)) / (4.0 * h * h);
    mixed_printed.record(std::abs(fxy + std::exp(x + y - J(x, y))));
    mixed.record(std::abs(fxy + std::exp(x + y - 2.0 * J(x, y))));
    prod.record(discrepancy(join_of_partials(xy, x, y), join(x, y)));
    sum.record(discrepancy(join_of_partials(xpy, x, y), ExtReal(1.0 + std::numbers::ln2)));
    joinp.record(discrepancy(join_of_partials(xvy, x, y), join(px, py)));
  }
  for (auto* p : {&sum1, &lap, &mixed_printed, &mixed, &prod, &sum, &joinp}) r.properties.push_back(*p);

  PropertyResult tanh_rule{"partials", "d/dx(x v -x) = tanh x", 1e-12};
  PropertyResult uu{"partials", "d/dx(u v u) = du/dx", 1e-12};
  const Expr dtanh = classic_derivative(parse("x \\/ -x"), "x");
  const Expr duu = classic_derivative(parse("x^2 \\/ x^2"), "x");
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real();
    tanh_rule.record(discrepancy(eval_real(dtanh, {{"x", JoinComplex(x)}}), ExtReal(std::tanh(x))));
    uu.record(discrepancy(eval_real(duu, {{"x", JoinComplex(x)}}), ExtReal(2.0 * x)));
  }
  r.properties.push_back(tanh_rule);
  r.properties.push_back(uu);
}

inline void maxlimit(Report& r, const Config& cfg, Sampler& rnd) {
  PropertyResult bound{"maxlimit", "max(x,y) <= x (+)_n y, n=-1,-2,-3", 1e-12};
  PropertyResult mono{"maxlimit", "gap to max non-increasing for n=-1..-4, |x-y| >= 0.5", 0.0};
  for (long i = 0; i < cfg.samples; ++i) {
    double x = rnd.real(), y = rnd.real();
    double m = std::max(x, y);
    for (int n = -1; n >= -3; --n) bound.record(std::max(0.0, m - op(n, x, y).value()));
    if (std::abs(x - y) < 0.5) continue;
    double prev = std::numeric_limits<double>::infinity();
    double rise = 0.0;
    for (int n = -1; n >= -4; --n) {
      double gap = op(n, x, y).value() - m;
      rise = std::max(rise, gap - prev);
      prev = gap;
    }
    mono.record(std::max(0.0, rise));
  }
  r.properties.push_back(bound);
  r.properties.push_back(mono);
}

}  // namespace detail

/// Runs one suite, or every suite for "all". Deterministic for a fixed seed.
inline Report run(const std::string& suite, const Config& cfg = {}) {
  using Fn = void (*)(Report&, const Config&, detail::Sampler&);
  const std::vector<std::pair<std::string, Fn>> table{
      {"laws", detail::laws},         {"table", detail::table},       {"binomial", detail::binomial},
      {"joinalg", detail::joinalg},   {"calculus", detail::calculus}, {"partials", detail::partials},
      {"maxlimit", detail::maxlimit},
  };
  Report report;
  bool found = false;
  for (const auto& [name, fn] : table) {
    if (suite != "all" && suite != name) continue;
    found = true;
    detail::Sampler rnd(cfg.seed);
    fn(report, cfg, rnd);
  }
  if (!found) throw domain_error("unknown suite '" + suite + "'");
  return report;
}

}  // namespace opchain::verify
