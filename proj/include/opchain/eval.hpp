#pragma once

/**
 * @file eval.hpp
 * @brief Evaluation of expression trees in real or complex mode.
 *
 * Real mode computes on ExtReal and keeps the real-semiring domain rules
 * (log of a negative raises). Complex mode computes on JoinComplex with the
 * chosen branch policy. D[n] nodes dispatch to the calculus module.
 */

#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "chain.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "numtower.hpp"

namespace opchain {

enum class Mode { real, complex };

inline std::string to_string(Mode m) { return m == Mode::real ? "real" : "complex"; }

using Env = std::map<std::string, JoinComplex>;

struct EvalOptions {
  Mode mode = Mode::complex;
  BranchPolicy policy = BranchPolicy::principal;
  LevelBounds bounds{};
};

namespace detail {

// Defined in calculus.hpp.
inline JoinComplex eval_derivative(int level, const Expr& f, const Env& env, const EvalOptions& opts);

inline bool is_positive_real(const JoinComplex& z) {
  return !z.is_bottom() && z.im() == 0.0 && z.re() > 0.0;
}

inline std::complex<double> integer_power(std::complex<double> base, long k) {
  bool invert = k < 0;
  unsigned long m = invert ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  std::complex<double> result(1.0, 0.0);
  while (m) {
    if (m & 1UL) result *= base;
    base *= base;
    m >>= 1;
  }
  return invert ? 1.0 / result : result;
}

inline JoinComplex cx_pow(const JoinComplex& a, const JoinComplex& b, BranchPolicy policy) {
  if (a.is_bottom() || b.is_bottom()) throw domain_error("power with a -inf operand");
  std::complex<double> z = a.value(), w = b.value();
  if (w.imag() == 0.0 && w.real() == std::floor(w.real()) && std::abs(w.real()) <= 1024.0) {
    long k = static_cast<long>(w.real());
    if (z == 0.0 && k < 0) throw domain_error("0 raised to a negative power");
    return JoinComplex(integer_power(z, k));
  }
  if (z == 0.0) {
    if (w.real() > 0.0) return JoinComplex(0.0);
    throw domain_error("0 raised to a power with non-positive real part");
  }
  std::complex<double> lz = cx_log(a, policy).value();
  return cx_exp(JoinComplex(w * lz));
}

inline JoinComplex cx_apply(Fn fn, const JoinComplex& a, BranchPolicy policy) {
  if (fn == Fn::exp) return cx_exp(a);
  if (fn == Fn::log) return cx_log(a, policy);
  if (a.is_bottom()) throw domain_error(std::string(name_of(fn)) + " of -inf");
  std::complex<double> z = a.value();
  switch (fn) {
    case Fn::sin: return JoinComplex(std::sin(z));
    case Fn::cos: return JoinComplex(std::cos(z));
    case Fn::sinh: return JoinComplex(std::sinh(z));
    case Fn::cosh: return JoinComplex(std::cosh(z));
    case Fn::tanh: return JoinComplex(std::tanh(z));
    default: break;
  }
  throw unsupported("unknown function");
}

inline JoinComplex eval_complex(const Expr& e, const Env& env, const EvalOptions& opts) {
  return std::visit(
      [&](const auto& x) -> JoinComplex {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          auto it = env.find(x.name);
          if (it == env.end()) throw unbound_variable(x.name);
          return it->second;
        } else if constexpr (std::is_same_v<T, Neg>) {
          JoinComplex a = eval_complex(x.arg, env, opts);
          if (a.is_bottom()) throw domain_error("-(-inf) is not representable");
          return JoinComplex(-a.value());
        } else if constexpr (std::is_same_v<T, Binary>) {
          JoinComplex a = eval_complex(x.lhs, env, opts);
          JoinComplex b = eval_complex(x.rhs, env, opts);
          switch (x.op) {
            case BinOp::add: return cx_oplus(OpLevel(0), a, b);
            case BinOp::sub: return cx_ominus(OpLevel(0), a, b);
            case BinOp::mul:
              if (a.is_bottom() || b.is_bottom()) {
                const JoinComplex& other = a.is_bottom() ? b : a;
                if (other.is_bottom() || is_positive_real(other)) return JoinComplex::bottom();
                throw undefined_form("-inf times a value that is not a positive real");
              }
              return JoinComplex(a.value() * b.value());
            case BinOp::div:
              if (b.is_bottom()) throw undefined_form("division by -inf");
              if (b.is_zero()) throw domain_error("division by zero");
              if (a.is_bottom()) {
                if (is_positive_real(b)) return a;
                throw undefined_form("-inf divided by a value that is not a positive real");
              }
              return JoinComplex(a.value() / b.value());
            case BinOp::pow: return cx_pow(a, b, opts.policy);
            case BinOp::join: return cx_join(a, b, opts.policy);
          }
          throw unsupported("unknown operator");
        } else if constexpr (std::is_same_v<T, OplusN>) {
          OpLevel n(x.level, opts.bounds);
          return cx_oplus(n, eval_complex(x.lhs, env, opts), eval_complex(x.rhs, env, opts), opts.policy);
        } else if constexpr (std::is_same_v<T, InvN>) {
          OpLevel n(x.level, opts.bounds);
          return cx_inverse(n, eval_complex(x.arg, env, opts), opts.policy);
        } else if constexpr (std::is_same_v<T, Apply>) {
          return cx_apply(x.fn, eval_complex(x.arg, env, opts), opts.policy);
        } else {
          OpLevel n(x.level, opts.bounds);
          return eval_derivative(n.value(), x.arg, env, opts);
        }
      },
      e.node().v);
}

inline ExtReal to_ext_real(const JoinComplex& z, const char* what) {
  if (z.is_bottom()) return ExtReal::neg_inf();
  if (z.im() != 0.0) throw domain_error(std::string(what) + " is not real");
  return z.re();
}

inline ExtReal checked_real(double v, const char* what) {
  if (std::isnan(v)) throw undefined_form(std::string(what) + " is undefined");
  return v;
}

inline ExtReal real_eval(const Expr& e, const Env& env, const EvalOptions& opts) {
  return std::visit(
      [&](const auto& x) -> ExtReal {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const>) {
          return to_ext_real(x.value, "constant");
        } else if constexpr (std::is_same_v<T, Var>) {
          auto it = env.find(x.name);
          if (it == env.end()) throw unbound_variable(x.name);
          return to_ext_real(it->second, ("binding of '" + x.name + "'").c_str());
        } else if constexpr (std::is_same_v<T, Neg>) {
          return -real_eval(x.arg, env, opts).value();
        } else if constexpr (std::is_same_v<T, Binary>) {
          ExtReal a = real_eval(x.lhs, env, opts);
          ExtReal b = real_eval(x.rhs, env, opts);
          switch (x.op) {
            case BinOp::add: return oplus(OpLevel(0), a, b);
            case BinOp::sub: return oplus(OpLevel(0), a, -b.value());
            case BinOp::mul: return oplus(OpLevel(1), a, b);
            case BinOp::div:
              if (b.value() == 0.0) throw domain_error("division by zero");
              if (!a.is_finite() && !b.is_finite()) throw undefined_form("inf / inf is not defined");
              return a.value() / b.value();
            case BinOp::pow: {
              double u = a.value(), v = b.value();
              if (u < 0.0 && v != std::floor(v))
                throw domain_error("negative base with a non-integer exponent");
              if (u == 0.0 && v < 0.0) throw domain_error("0 raised to a negative power");
              return checked_real(std::pow(u, v), "power");
            }
            case BinOp::join: return join(a, b);
          }
          throw unsupported("unknown operator");
        } else if constexpr (std::is_same_v<T, OplusN>) {
          OpLevel n(x.level, opts.bounds);
          return oplus(n, real_eval(x.lhs, env, opts), real_eval(x.rhs, env, opts));
        } else if constexpr (std::is_same_v<T, InvN>) {
          OpLevel n(x.level, opts.bounds);
          return inverse(n, real_eval(x.arg, env, opts));
        } else if constexpr (std::is_same_v<T, Apply>) {
          ExtReal a = real_eval(x.arg, env, opts);
          if (x.fn == Fn::exp) return ext_exp(a);
          if (x.fn == Fn::log) return ext_log(a);
          double v = a.value();
          switch (x.fn) {
            case Fn::sin:
            case Fn::cos:
              if (!a.is_finite()) throw domain_error("trigonometric function of an infinite value");
              return x.fn == Fn::sin ? std::sin(v) : std::cos(v);
            case Fn::sinh: return std::sinh(v);
            case Fn::cosh: return std::cosh(v);
            case Fn::tanh: return std::tanh(v);
            default: break;
          }
          throw unsupported("unknown function");
        } else {
          // n-derivatives are computed in complex mode; the value must come
          // back real to re-enter the real semiring.
          OpLevel n(x.level, opts.bounds);
          JoinComplex r = eval_derivative(n.value(), x.arg, env, opts);
          if (r.is_bottom()) return ExtReal::neg_inf();
          double scale = std::max(1.0, std::abs(r.re()));
          if (std::abs(r.im()) > 1e-12 * scale)
            throw domain_error("n-derivative is not real at this point");
          return r.re();
        }
      },
      e.node().v);
}

}  // namespace detail

/// Real-mode evaluation returning the extended real directly (+inf allowed).
inline ExtReal eval_real(const Expr& e, const Env& env, EvalOptions opts = {}) {
  opts.mode = Mode::real;
  return detail::real_eval(e, env, opts);
}

/// Evaluate in the mode selected by opts. In real mode +inf has no
/// JoinComplex counterpart and is reported as an overflow.
inline JoinComplex eval(const Expr& e, const Env& env, const EvalOptions& opts = {}) {
  if (opts.mode == Mode::complex) return detail::eval_complex(e, env, opts);
  ExtReal r = detail::real_eval(e, env, opts);
  if (r.is_pos_inf()) throw overflow_error("result is +inf");
  if (r.is_neg_inf()) return JoinComplex::bottom();
  return JoinComplex(r.value());
}

}  // namespace opchain

#include "calculus.hpp"
