#pragma once

/**
 * @file numtower.hpp
 * @brief Extended numeric carriers and exp/log with the boundary conventions
 *        log(0) = -inf and e^{-inf} = 0.
 *
 * Two carriers:
 *   ExtReal      the extended reals R u {-inf, +inf}, never NaN
 *   JoinComplex  C u {Bottom}, a single adjoined -inf. Bottom is the identity
 *                of the join and absorbing for +. There is no +inf.
 *
 * The complex logarithm is multivalued. BranchPolicy::principal keeps every
 * logarithmic result in the strip Im in (-pi, pi]; BranchPolicy::modulo_2pi
 * leaves imaginary parts unreduced and compares values modulo 2*pi*i.
 */

#include <cmath>
#include <compare>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace opchain {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// ExtReal
// ---------------------------------------------------------------------------

class ExtReal {
 public:
  constexpr ExtReal() = default;

  // Implicit so that plain doubles flow into the real-mode chain.
  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw domain_error("NaN is not an extended real");
  }

  static constexpr ExtReal neg_inf() { return ExtReal(tag{}, -std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal pos_inf() { return ExtReal(tag{}, std::numeric_limits<double>::infinity()); }

  constexpr double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  constexpr bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }

  // NaN is excluded, so the IEEE order is total here.
  constexpr auto operator<=>(const ExtReal&) const = default;

 private:
  struct tag {};
  constexpr ExtReal(tag, double v) : v_(v) {}
  double v_ = 0.0;
};

// ---------------------------------------------------------------------------
// JoinComplex
// ---------------------------------------------------------------------------

class JoinComplex {
 public:
  constexpr JoinComplex() = default;

  JoinComplex(double re, double im = 0.0) : z_(re, im) {  // NOLINT
    check();
  }

  explicit JoinComplex(std::complex<double> z) : z_(z) { check(); }

  static constexpr JoinComplex bottom() {
    JoinComplex b;
    b.bottom_ = true;
    return b;
  }

  constexpr bool is_bottom() const { return bottom_; }

  std::complex<double> value() const {
    if (bottom_) throw domain_error("Bottom has no finite complex value");
    return z_;
  }
  double re() const { return value().real(); }
  double im() const { return value().imag(); }

  bool is_zero() const { return !bottom_ && z_ == std::complex<double>(0.0, 0.0); }
  bool is_real() const { return !bottom_ && z_.imag() == 0.0; }

  // Exact structural equality. Bottom equals only Bottom.
  friend bool operator==(const JoinComplex& a, const JoinComplex& b) {
    if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
    return a.z_ == b.z_;
  }

 private:
  void check() const {
    if (std::isinf(z_.real()) || std::isinf(z_.imag()))
      throw overflow_error("complex value is not finite");
    if (std::isnan(z_.real()) || std::isnan(z_.imag()))
      throw domain_error("NaN component in complex value");
  }

  std::complex<double> z_{0.0, 0.0};
  bool bottom_ = false;
};

enum class BranchPolicy { principal, modulo_2pi };

inline std::string to_string(BranchPolicy p) {
  return p == BranchPolicy::principal ? "principal" : "modulo";
}

// ---------------------------------------------------------------------------
// Tolerant comparison
// ---------------------------------------------------------------------------

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;
};

// |a-b| scaled by the larger magnitude, floored by the absolute tolerance.
inline bool within(double diff, double scale, Tolerance tol) {
  return diff <= tol.abs || diff <= tol.rel * scale;
}

inline bool approx_equal(ExtReal a, ExtReal b, Tolerance tol = {}) {
  if (!a.is_finite() || !b.is_finite()) return a == b;
  double x = a.value(), y = b.value();
  return within(std::abs(x - y), std::max(std::abs(x), std::abs(y)), tol);
}

// Distance between two carriers. Infinite when exactly one side is Bottom.
// With modulo_2pi the imaginary gap is first reduced into [-pi, pi].
inline double distance(const JoinComplex& a, const JoinComplex& b,
                       BranchPolicy policy = BranchPolicy::principal) {
  if (a.is_bottom() || b.is_bottom())
    return a.is_bottom() == b.is_bottom() ? 0.0 : std::numeric_limits<double>::infinity();
  std::complex<double> d = a.value() - b.value();
  if (policy == BranchPolicy::modulo_2pi) d.imag(std::remainder(d.imag(), two_pi));
  return std::abs(d);
}

inline bool approx_equal(const JoinComplex& a, const JoinComplex& b, Tolerance tol = {},
                         BranchPolicy policy = BranchPolicy::principal) {
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
  double scale = std::max(std::abs(a.value()), std::abs(b.value()));
  return within(distance(a, b, policy), scale, tol);
}

// ---------------------------------------------------------------------------
// Real exp / log
// ---------------------------------------------------------------------------

inline ExtReal ext_exp(ExtReal x) {
  if (x.is_neg_inf()) return 0.0;
  if (x.is_pos_inf()) return ExtReal::pos_inf();
  return std::exp(x.value());
}

inline ExtReal ext_log(ExtReal x) {
  if (x.is_pos_inf()) return ExtReal::pos_inf();
  if (x.is_neg_inf() || x.value() < 0.0)
    throw domain_error("real logarithm of a negative value");
  if (x.value() == 0.0) return ExtReal::neg_inf();
  return std::log(x.value());
}

// ---------------------------------------------------------------------------
// Complex exp / log
// ---------------------------------------------------------------------------

// Imaginary part reduced into (-pi, pi].
inline JoinComplex canonicalize(const JoinComplex& z) {
  if (z.is_bottom()) return z;
  double im = std::remainder(z.im(), two_pi);
  if (im <= -pi) im += two_pi;
  return JoinComplex(z.re(), im);
}

inline JoinComplex apply_policy(const JoinComplex& z, BranchPolicy policy) {
  return policy == BranchPolicy::principal ? canonicalize(z) : z;
}

inline JoinComplex cx_exp(const JoinComplex& z) {
  if (z.is_bottom()) return JoinComplex(0.0, 0.0);
  std::complex<double> w = std::exp(z.value());
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw overflow_error("complex exponential overflows");
  return JoinComplex(w);
}

inline JoinComplex cx_log(const JoinComplex& z, BranchPolicy policy = BranchPolicy::principal) {
  if (z.is_bottom()) throw domain_error("logarithm of Bottom is undefined");
  if (z.is_zero()) return JoinComplex::bottom();
  return apply_policy(JoinComplex(std::log(z.value())), policy);
}

namespace detail {

// exp(z) - 1 without cancellation for small z.
inline std::complex<double> expm1(std::complex<double> z) {
  double x = z.real(), y = z.imag();
  double s = std::sin(0.5 * y);
  double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  double im = std::exp(x) * std::sin(y);
  return {re, im};
}

// log(1 + z) without cancellation for small z.
inline std::complex<double> log1p(std::complex<double> z) {
  if (std::abs(z) >= 0.5) return std::log(1.0 + z);
  double x = z.real(), y = z.imag();
  double re = 0.5 * std::log1p(x * (2.0 + x) + y * y);
  double im = std::atan2(y, 1.0 + x);
  return {re, im};
}

}  // namespace detail

}  // namespace opchain
