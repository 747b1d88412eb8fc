#pragma once

/**
 * @file chain.hpp
 * @brief The graded family of binary operations x (+)_n y.
 *
 *   (+)_0  is ordinary addition
 *   (+)_1  is ordinary multiplication
 *   (+)_{n+1}(x, y) = exp( (+)_n(log x, log y) )     going up
 *   (+)_{n-1}(x, y) = log( (+)_n(exp x, exp y) )     going down
 *
 * (+)_{-1} is the join, x v y = log(e^x + e^y). Each level distributes over
 * the one below it. Real mode works on ExtReal and raises on leaving the
 * domain; complex mode works on JoinComplex and has no sign restriction.
 *
 * Levels at or below -1 are evaluated in "max plus excess" form so that
 * large arguments never overflow the intermediate exponentials.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "errors.hpp"
#include "numtower.hpp"

namespace opchain {

inline constexpr int hard_level_min = -8;
inline constexpr int hard_level_max = 8;

struct LevelBounds {
  int lo = -4;
  int hi = 4;

  bool valid() const {
    return lo <= hi && lo >= hard_level_min && hi <= hard_level_max;
  }
  bool contains(int n) const { return n >= lo && n <= hi; }
};

// Index of an operation in the chain, checked against configurable bounds.
class OpLevel {
 public:
  explicit OpLevel(int n, LevelBounds bounds = {}) : n_(n) {
    if (!bounds.valid())
      throw level_error("level bounds must satisfy " + std::to_string(hard_level_min) +
                        " <= lo <= hi <= " + std::to_string(hard_level_max));
    if (!bounds.contains(n))
      throw level_error("operation level " + std::to_string(n) + " outside [" +
                        std::to_string(bounds.lo) + ", " + std::to_string(bounds.hi) + "]");
  }

  constexpr int value() const { return n_; }
  constexpr auto operator<=>(const OpLevel&) const = default;

 private:
  int n_;
};

namespace detail {

inline constexpr double exp_overflow_threshold = 709.782712893384;

// exp that refuses to turn a finite number into +inf.
inline ExtReal exp_checked(ExtReal x) {
  ExtReal r = ext_exp(x);
  if (x.is_finite() && !r.is_finite()) throw overflow_error("exp overflows binary64");
  return r;
}

// (+)_n(M, m) - M for n <= -1, M >= m, M > 0 finite. Always >= 0.
inline double excess(int n, double hi, double lo) {
  if (n == -1) {
    if (std::isinf(lo)) return 0.0;
    return std::log1p(std::exp(lo - hi));
  }
  if (hi > exp_overflow_threshold) return 0.0;
  double r = excess(n + 1, std::exp(hi), std::exp(lo));
  return std::log1p(r * std::exp(-hi));
}

inline ExtReal oplus_real(int n, ExtReal x, ExtReal y);

inline ExtReal join_real(ExtReal x, ExtReal y) {
  if (x.is_pos_inf() || y.is_pos_inf()) return ExtReal::pos_inf();
  if (x.is_neg_inf()) return y;
  if (y.is_neg_inf()) return x;
  double a = x.value(), b = y.value();
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

inline ExtReal oplus_down(int n, ExtReal x, ExtReal y) {
  if (n == -1) return join_real(x, y);
  if (x.is_pos_inf() || y.is_pos_inf()) return ExtReal::pos_inf();
  double hi = std::max(x.value(), y.value());
  double lo = std::min(x.value(), y.value());
  if (hi > 0.0) return hi + excess(n, hi, lo);
  // Both exponentials lie in [0, 1]; the next level up cannot overflow.
  return ext_log(oplus_real(n + 1, ext_exp(x), ext_exp(y)));
}

inline ExtReal oplus_real(int n, ExtReal x, ExtReal y) {
  if (n <= -1) return oplus_down(n, x, y);
  if (n == 0) {
    if ((x.is_pos_inf() && y.is_neg_inf()) || (x.is_neg_inf() && y.is_pos_inf()))
      throw undefined_form("inf - inf is not defined");
    return x.value() + y.value();
  }
  if (n == 1) {
    bool zero_inf = (x.value() == 0.0 && !y.is_finite()) || (y.value() == 0.0 && !x.is_finite());
    if (zero_inf) throw undefined_form("0 * inf is not defined");
    return x.value() * y.value();
  }
  return exp_checked(oplus_real(n - 1, ext_log(x), ext_log(y)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Real mode
// ---------------------------------------------------------------------------

inline ExtReal join(ExtReal x, ExtReal y) { return detail::join_real(x, y); }

inline ExtReal oplus(OpLevel n, ExtReal x, ExtReal y) {
  return detail::oplus_real(n.value(), x, y);
}

/// Identity element: exp^(n)(0) for n >= 0, -inf for the join.
inline ExtReal identity(OpLevel n) {
  int k = n.value();
  if (k == -1) return ExtReal::neg_inf();
  if (k < -1)
    throw no_identity("no real identity for level " + std::to_string(k) +
                      ": it would need e^id = -inf");
  ExtReal v = 0.0;
  for (int i = 0; i < k; ++i) v = detail::exp_checked(v);
  return v;
}

/// Inverse element: exp^(n-1)[ 1 / log^(n-1)(x) ] for n >= 1, -x for n = 0.
inline ExtReal inverse(OpLevel n, ExtReal x) {
  int k = n.value();
  if (k == -1)
    throw no_inverse("the real join has no inverse; in complex mode it is z + i*pi");
  if (k < -1) throw no_inverse("no inverse below the join in the real chain");
  if (!x.is_finite()) throw domain_error("infinite value has no inverse");
  if (k == 0) return -x.value();
  ExtReal t = x;
  for (int i = 1; i < k; ++i) t = ext_log(t);
  if (!t.is_finite() || t.value() == 0.0)
    throw domain_error("inverse undefined: iterated log is zero or infinite");
  t = 1.0 / t.value();
  for (int i = 1; i < k; ++i) t = detail::exp_checked(t);
  return t;
}

/// k-fold join of x with itself, ln(k) + x.
inline ExtReal nfold_join(long k, ExtReal x) {
  if (k < 1) throw domain_error("n-fold join needs n >= 1");
  if (!x.is_finite()) return x;
  return std::log(static_cast<double>(k)) + x.value();
}

// ---------------------------------------------------------------------------
// Complex mode
// ---------------------------------------------------------------------------

namespace detail {

// Width of the rounding band in which e^a + e^b is treated as exactly zero.
inline double cancellation_band(std::complex<double> a, std::complex<double> b) {
  return 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a) + std::abs(b));
}

inline JoinComplex cx_join_impl(const JoinComplex& z, const JoinComplex& w, BranchPolicy policy) {
  if (z.is_bottom()) return w;
  if (w.is_bottom()) return z;
  std::complex<double> a = z.value(), b = w.value();
  if (a.real() < b.real()) std::swap(a, b);
  std::complex<double> t = std::exp(b - a);
  if (std::abs(1.0 + t) <= cancellation_band(a, b)) return JoinComplex::bottom();
  return apply_policy(JoinComplex(a + detail::log1p(t)), policy);
}

// log(e^z - e^w).
inline JoinComplex cx_log_difference(const JoinComplex& z, const JoinComplex& w,
                                     BranchPolicy policy) {
  if (w.is_bottom()) return z;
  if (z.is_bottom()) return apply_policy(JoinComplex(w.value() + std::complex<double>(0.0, pi)), policy);
  std::complex<double> a = z.value(), b = w.value();
  std::complex<double> d = a - b;
  d.imag(std::remainder(d.imag(), two_pi));
  if (std::abs(d) <= cancellation_band(a, b)) return JoinComplex::bottom();
  std::complex<double> r;
  if (d.real() >= 0.0) {
    std::complex<double> m = -detail::expm1(-d);  // 1 - e^{b-a}
    if (m == 0.0) return JoinComplex::bottom();
    r = a + std::log(m);
  } else {
    std::complex<double> m = detail::expm1(d);  // e^{a-b} - 1
    if (m == 0.0) return JoinComplex::bottom();
    r = b + std::log(m);
  }
  return apply_policy(JoinComplex(r), policy);
}

inline JoinComplex cx_oplus_impl(int n, const JoinComplex& z, const JoinComplex& w,
                                 BranchPolicy policy) {
  if (n == -1) return cx_join_impl(z, w, policy);
  if (n == 0) {
    if (z.is_bottom() || w.is_bottom()) return JoinComplex::bottom();
    return JoinComplex(z.value() + w.value());
  }
  if (n == 1) {
    if (z.is_bottom() || w.is_bottom()) throw undefined_form("-inf * z is not defined");
    return JoinComplex(z.value() * w.value());
  }
  if (n >= 2)
    return cx_exp(cx_oplus_impl(n - 1, cx_log(z, policy), cx_log(w, policy), policy));
  return cx_log(cx_oplus_impl(n + 1, cx_exp(z), cx_exp(w), policy), policy);
}

inline JoinComplex cx_inverse_impl(int n, const JoinComplex& z, BranchPolicy policy) {
  if (n == -1) {
    if (z.is_bottom()) return z;
    return apply_policy(JoinComplex(z.value() + std::complex<double>(0.0, pi)), policy);
  }
  if (n == 0) {
    if (z.is_bottom()) throw domain_error("-(-inf) is not representable");
    return JoinComplex(-z.value());
  }
  if (n == 1) {
    if (z.is_bottom() || z.is_zero()) throw domain_error("no multiplicative inverse of 0");
    return JoinComplex(1.0 / z.value());
  }
  if (n >= 2) return cx_exp(cx_inverse_impl(n - 1, cx_log(z, policy), policy));
  return cx_log(cx_inverse_impl(n + 1, cx_exp(z), policy), policy);
}

inline JoinComplex cx_ominus_impl(int n, const JoinComplex& z, const JoinComplex& w,
                                  BranchPolicy policy) {
  if (n == -1) return cx_log_difference(z, w, policy);
  if (n == 0) {
    if (w.is_bottom()) throw domain_error("subtracting -inf leaves +inf");
    if (z.is_bottom()) return z;
    return JoinComplex(z.value() - w.value());
  }
  if (n == 1) {
    if (z.is_bottom() || w.is_bottom()) throw undefined_form("-inf in a quotient");
    if (w.is_zero()) throw domain_error("division by zero");
    return JoinComplex(z.value() / w.value());
  }
  if (n >= 2)
    return cx_exp(cx_ominus_impl(n - 1, cx_log(z, policy), cx_log(w, policy), policy));
  return cx_log(cx_ominus_impl(n + 1, cx_exp(z), cx_exp(w), policy), policy);
}

}  // namespace detail

inline JoinComplex cx_join(const JoinComplex& z, const JoinComplex& w,
                           BranchPolicy policy = BranchPolicy::principal) {
  return detail::cx_join_impl(z, w, policy);
}

inline JoinComplex cx_oplus(OpLevel n, const JoinComplex& z, const JoinComplex& w,
                            BranchPolicy policy = BranchPolicy::principal) {
  return detail::cx_oplus_impl(n.value(), z, w, policy);
}

/// The inverse of z at level n: -z, 1/z, z + i*pi, exp(1/log z), ...
inline JoinComplex cx_inverse(OpLevel n, const JoinComplex& z,
                              BranchPolicy policy = BranchPolicy::principal) {
  return detail::cx_inverse_impl(n.value(), z, policy);
}

/// z (+)_n (~_n w), evaluated without materialising the inverse.
/// Level 2 uses exp(log z / log w) instead of exp(log z * log exp(1/log w)),
/// which would overflow as w approaches e.
inline JoinComplex cx_ominus(OpLevel n, const JoinComplex& z, const JoinComplex& w,
                             BranchPolicy policy = BranchPolicy::principal) {
  return detail::cx_ominus_impl(n.value(), z, w, policy);
}

inline JoinComplex cx_identity(OpLevel n) {
  int k = n.value();
  if (k == -1) return JoinComplex::bottom();
  if (k < -1)
    throw no_identity("no identity for level " + std::to_string(k) +
                      ": it is only a limit point (log of -inf)");
  return JoinComplex(identity(n).value());
}

}  // namespace opchain
