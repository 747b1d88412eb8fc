#pragma once

/**
 * @file symbolic.hpp
 * @brief Lowering of chain nodes, light simplification and classical
 *        symbolic differentiation.
 */

#include <complex>
#include <string>

#include "chain.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "numtower.hpp"

namespace opchain {

/// Rewrite oplus[n] and inv[n] nodes into +, *, \/, exp and log.
inline Expr lower(const Expr& e);

namespace detail {

inline Expr lower_oplus(int n, const Expr& a, const Expr& b) {
  switch (n) {
    case -1: return ex::join(a, b);
    case 0: return ex::add(a, b);
    case 1: return ex::mul(a, b);
    default: break;
  }
  if (n >= 2) return ex::exp(lower_oplus(n - 1, ex::log(a), ex::log(b)));
  return ex::log(lower_oplus(n + 1, ex::exp(a), ex::exp(b)));
}

inline Expr lower_inverse(int n, const Expr& a) {
  switch (n) {
    case -1: return ex::add(a, ex::num(0.0, pi));
    case 0: return ex::neg(a);
    case 1: return ex::div(ex::num(1.0), a);
    default: break;
  }
  if (n >= 2) return ex::exp(lower_inverse(n - 1, ex::log(a)));
  return ex::log(lower_inverse(n + 1, ex::exp(a)));
}

inline bool is_const(const Expr& e, double re, double im = 0.0) {
  auto* c = e.as<Const>();
  return c && !c->value.is_bottom() && c->value.value() == std::complex<double>(re, im);
}

inline const JoinComplex* finite_const(const Expr& e) {
  auto* c = e.as<Const>();
  return c && !c->value.is_bottom() ? &c->value : nullptr;
}

// Folds an operation on two finite constants; leaves the node alone when the
// result is not a finite value.
template <class F>
inline Expr fold_or(Expr fallback, F&& f) {
  try {
    return ex::constant(JoinComplex(f()));
  } catch (const math_error&) {
    return fallback;
  }
}

}  // namespace detail

inline Expr lower(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const> || std::is_same_v<T, Var>) return e;
        else if constexpr (std::is_same_v<T, Neg>) return ex::neg(lower(x.arg));
        else if constexpr (std::is_same_v<T, Binary>) return ex::binary(x.op, lower(x.lhs), lower(x.rhs));
        else if constexpr (std::is_same_v<T, OplusN>) return detail::lower_oplus(x.level, lower(x.lhs), lower(x.rhs));
        else if constexpr (std::is_same_v<T, InvN>) return detail::lower_inverse(x.level, lower(x.arg));
        else if constexpr (std::is_same_v<T, Apply>) return ex::apply(x.fn, lower(x.arg));
        else return ex::deriv(x.level, lower(x.arg));
      },
      e.node().v);
}

/// Bottom-up constant folding and the 0/1 identities. Never changes the
/// value of an expression where it is defined.
inline Expr simplify(const Expr& e) {
  using detail::finite_const;
  using detail::is_const;
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const> || std::is_same_v<T, Var>) {
          return e;
        } else if constexpr (std::is_same_v<T, Neg>) {
          Expr a = simplify(x.arg);
          if (auto* c = finite_const(a)) return ex::constant(JoinComplex(-c->value()));
          if (auto* n = a.as<Neg>()) return n->arg;
          return ex::neg(a);
        } else if constexpr (std::is_same_v<T, Binary>) {
          Expr a = simplify(x.lhs);
          Expr b = simplify(x.rhs);
          Expr node = ex::binary(x.op, a, b);
          auto* ca = finite_const(a);
          auto* cb = finite_const(b);
          if (ca && cb) {
            std::complex<double> u = ca->value(), v = cb->value();
            switch (x.op) {
              case BinOp::add: return detail::fold_or(node, [&] { return u + v; });
              case BinOp::sub: return detail::fold_or(node, [&] { return u - v; });
              case BinOp::mul: return detail::fold_or(node, [&] { return u * v; });
              case BinOp::div:
                if (v != 0.0) return detail::fold_or(node, [&] { return u / v; });
                return node;
              case BinOp::join:
                try {
                  return ex::constant(cx_join(*ca, *cb));
                } catch (const math_error&) {
                  return node;
                }
              case BinOp::pow: break;
            }
          }
          switch (x.op) {
            case BinOp::add:
              if (is_const(a, 0.0)) return b;
              if (is_const(b, 0.0)) return a;
              break;
            case BinOp::sub:
              if (is_const(b, 0.0)) return a;
              if (is_const(a, 0.0)) return ex::neg(b);
              break;
            case BinOp::mul:
              if (is_const(a, 0.0) || is_const(b, 0.0)) return ex::num(0.0);
              if (is_const(a, 1.0)) return b;
              if (is_const(b, 1.0)) return a;
              break;
            case BinOp::div:
              if (is_const(b, 1.0)) return a;
              break;
            case BinOp::pow:
              if (is_const(b, 1.0)) return a;
              if (is_const(b, 0.0)) return ex::num(1.0);
              break;
            case BinOp::join:
              if (auto* c = a.as<Const>(); c && c->value.is_bottom()) return b;
              if (auto* c = b.as<Const>(); c && c->value.is_bottom()) return a;
              break;
          }
          return node;
        } else if constexpr (std::is_same_v<T, OplusN>) {
          return ex::oplus(x.level, simplify(x.lhs), simplify(x.rhs));
        } else if constexpr (std::is_same_v<T, InvN>) {
          return ex::inv(x.level, simplify(x.arg));
        } else if constexpr (std::is_same_v<T, Apply>) {
          Expr a = simplify(x.arg);
          if (x.fn == Fn::exp && is_const(a, 0.0)) return ex::num(1.0);
          if (x.fn == Fn::log && is_const(a, 1.0)) return ex::num(0.0);
          return ex::apply(x.fn, a);
        } else {
          return ex::deriv(x.level, simplify(x.arg));
        }
      },
      e.node().v);
}

inline Expr classic_derivative(const Expr& f, const std::string& var);

/// Closed-form n-derivative as an expression tree, for n <= 1.
///   D_0 f    = f'
///   D_1 f    = exp(z f' / f)
///   D_{-1} f = f + log f' - z
///   D_n f    = f (+)_{n+1} log(D_{n+1} f) (+)_{n+1} ~_{n+1} z    (n <= -2)
inline Expr expand_n_derivative(int n, const Expr& f, const std::string& var) {
  if (n >= 2) throw unsupported("no closed form for D_" + std::to_string(n) + "; use the limit method");
  Expr z = ex::var(var);
  if (n == 0) return classic_derivative(f, var);
  if (n == 1) return ex::exp(ex::div(ex::mul(z, classic_derivative(f, var)), f));
  if (n == -1) return ex::sub(ex::add(f, ex::log(classic_derivative(f, var))), z);
  int m = n + 1;
  Expr inner = expand_n_derivative(m, f, var);
  return ex::oplus(m, ex::oplus(m, f, ex::log(inner)), ex::inv(m, z));
}

namespace detail {

inline Expr d(const Expr& e, const std::string& v);

inline Expr d_apply(Fn fn, const Expr& u, const std::string& v) {
  Expr du = d(u, v);
  switch (fn) {
    case Fn::exp: return ex::mul(ex::exp(u), du);
    case Fn::log: return ex::div(du, u);
    case Fn::sin: return ex::mul(ex::apply(Fn::cos, u), du);
    case Fn::cos: return ex::mul(ex::neg(ex::apply(Fn::sin, u)), du);
    case Fn::sinh: return ex::mul(ex::apply(Fn::cosh, u), du);
    case Fn::cosh: return ex::mul(ex::apply(Fn::sinh, u), du);
    case Fn::tanh:
      return ex::mul(ex::sub(ex::num(1.0), ex::pow(ex::apply(Fn::tanh, u), ex::num(2.0))), du);
  }
  throw unsupported("unknown function");
}

inline Expr d_binary(const Binary& b, const std::string& v) {
  const Expr& u = b.lhs;
  const Expr& w = b.rhs;
  switch (b.op) {
    case BinOp::add: return ex::add(d(u, v), d(w, v));
    case BinOp::sub: return ex::sub(d(u, v), d(w, v));
    case BinOp::mul: return ex::add(ex::mul(d(u, v), w), ex::mul(u, d(w, v)));
    case BinOp::div:
      return ex::div(ex::sub(ex::mul(d(u, v), w), ex::mul(u, d(w, v))), ex::pow(w, ex::num(2.0)));
    case BinOp::join: {
      Expr eu = ex::exp(u), ew = ex::exp(w);
      return ex::div(ex::add(ex::mul(eu, d(u, v)), ex::mul(ew, d(w, v))), ex::add(eu, ew));
    }
    case BinOp::pow: {
      bool base_dep = depends_on(u, v);
      bool exp_dep = depends_on(w, v);
      if (!exp_dep) {
        if (!base_dep) return ex::num(0.0);
        return ex::mul(ex::mul(w, ex::pow(u, ex::sub(w, ex::num(1.0)))), d(u, v));
      }
      Expr p = ex::pow(u, w);
      if (!base_dep) return ex::mul(ex::mul(p, ex::log(u)), d(w, v));
      return ex::mul(p, ex::add(ex::mul(d(w, v), ex::log(u)), ex::div(ex::mul(w, d(u, v)), u)));
    }
  }
  throw unsupported("unknown operator");
}

inline Expr d(const Expr& e, const std::string& v) {
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const>) return ex::num(0.0);
        else if constexpr (std::is_same_v<T, Var>) return ex::num(x.name == v ? 1.0 : 0.0);
        else if constexpr (std::is_same_v<T, Neg>) return ex::neg(d(x.arg, v));
        else if constexpr (std::is_same_v<T, Binary>) return d_binary(x, v);
        else if constexpr (std::is_same_v<T, OplusN>) return d(detail::lower_oplus(x.level, x.lhs, x.rhs), v);
        else if constexpr (std::is_same_v<T, InvN>) return d(detail::lower_inverse(x.level, x.arg), v);
        else if constexpr (std::is_same_v<T, Apply>) return d_apply(x.fn, x.arg, v);
        else {
          std::string inner = default_variable(x.arg);
          if (inner != v && depends_on(x.arg, v) && depends_on(x.arg, inner))
            throw unsupported("derivative of D[n] taken against a different variable");
          return d(lower(expand_n_derivative(x.level, x.arg, inner)), v);
        }
      },
      e.node().v);
}

}  // namespace detail

/// Ordinary derivative d f / d var, simplified.
inline Expr classic_derivative(const Expr& f, const std::string& var) {
  return simplify(detail::d(f, var));
}

inline Expr classic_derivative(const Expr& f) { return classic_derivative(f, default_variable(f)); }

}  // namespace opchain
