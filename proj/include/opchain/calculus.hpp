#pragma once

/**
 * @file calculus.hpp
 * @brief The v-derivative Df = f + log f' - z and the n-derivatives D_n.
 *
 * D_n f(z) is the limit of the level-n difference quotient
 *
 *     [ f(z (+)_n h) (-)_n f(z) ] (-)_{n+1} h      as h -> 0_n,
 *
 * where (-)_n is (+)_n with the level-n inverse. Closed forms exist for
 * n <= 1 and are the primary path; the limit is an independent check and the
 * only route for n >= 2.
 *
 * The limit is conjugated back to level 0: a real step s > 0 becomes
 * h = log^{(-n)}(s) below level 0 and h = exp^{(n)}(s) above it, so the
 * quotient is an analytic function of s near 0. Quotients along a geometric
 * s schedule are then extrapolated to s = 0 with Neville's scheme, which
 * beats the O(s) truncation error of the raw quotient by many orders.
 */

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "expr.hpp"
#include "numtower.hpp"
#include "symbolic.hpp"

namespace opchain {

/// Evaluation context for univariate calculus: which identifier is the
/// variable, and bindings for every other identifier.
struct Context {
  std::string var = "z";
  Env env{};
  BranchPolicy policy = BranchPolicy::principal;
  LevelBounds bounds{};
};

struct LimitDiagnostics {
  std::vector<double> steps;             // level-0 steps s, decreasing to 0
  std::vector<JoinComplex> h_schedule;   // the level-n h fed to the quotient
  std::vector<JoinComplex> quotients;    // raw difference quotients
  std::vector<JoinComplex> iterates;     // extrapolated estimates
  bool converged = false;
  double final_delta = std::numeric_limits<double>::infinity();
};

enum class Method { closed_form, limit };

inline std::string to_string(Method m) { return m == Method::closed_form ? "closed-form" : "limit"; }

struct DnResult {
  JoinComplex value;
  Method method = Method::closed_form;
  std::optional<LimitDiagnostics> diagnostics;
};

class no_convergence : public error {
 public:
  explicit no_convergence(LimitDiagnostics diagnostics)
      : error("limit did not converge (last successive difference " +
              std::to_string(diagnostics.final_delta) + ")"),
        diagnostics_(std::move(diagnostics)) {}

  const LimitDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  LimitDiagnostics diagnostics_;
};

struct LimitOptions {
  double tolerance = 1e-6;
  std::vector<double> steps;  // empty selects default_steps()

  // Relative band under which the level 0 value inside the D_{-2} quotient
  // is read as an exact cancellation (quotient = Bottom). Covers the
  // rounding noise of recovering s from z (+)_n h.
  double bottom_band = 1e-8;
};

/// s_k = 2^{-3-k}, k = 0..13.
inline std::vector<double> default_steps() {
  std::vector<double> s;
  for (int k = 0; k < 14; ++k) s.push_back(std::ldexp(1.0, -3 - k));
  return s;
}

namespace detail {

inline JoinComplex apply_at(const Expr& f, const JoinComplex& z, const Context& ctx) {
  Env env = ctx.env;
  env.insert_or_assign(ctx.var, z);
  return eval(f, env, EvalOptions{Mode::complex, ctx.policy, ctx.bounds});
}

inline void require_finite_point(const JoinComplex& z) {
  if (z.is_bottom()) throw domain_error("derivative at -inf is not defined");
}

// One downward step of the closed form: D_{m-1} from D_m,
//   D_{m-1} = f (+)_m log D_m (+)_m ~_m z.
// Below level 0 this is log of the level m+1 value
//   e^f (+)_{m+1} D_m (+)_{m+1} ~_{m+1} e^z,
// which is only fixed modulo 2*pi*i. For m = -1 the sheet is fixed by taking
// D_{-1} - e^z = Log[f' exp(f - z - e^z)] principal, which is the sheet the
// difference quotient converges to and keeps D_{-2} exp = exp. Further down
// the whole level m+1 value is taken principal.
inline JoinComplex descend(int m, const JoinComplex& fz, const JoinComplex& dm, const JoinComplex& z,
                           BranchPolicy policy) {
  if (m == 0) {
    JoinComplex t = cx_oplus_impl(0, fz, cx_log(dm, policy), policy);
    return apply_policy(cx_oplus_impl(0, t, cx_inverse_impl(0, z, policy), policy), policy);
  }
  constexpr BranchPolicy raw = BranchPolicy::modulo_2pi;
  if (m == -1) {
    JoinComplex t = canonicalize(cx_ominus_impl(0, dm, cx_exp(z), raw));
    return cx_log(cx_oplus_impl(0, cx_exp(fz), t, raw), policy);
  }
  JoinComplex t = cx_oplus_impl(m + 1, cx_exp(fz), dm, raw);
  JoinComplex inner = cx_oplus_impl(m + 1, t, cx_inverse_impl(m + 1, cx_exp(z), raw), raw);
  return cx_log(canonicalize(inner), policy);
}

// Level-n image of the level-0 step s.
inline JoinComplex conjugate_step(int n, double s, BranchPolicy policy) {
  JoinComplex h(s);
  for (int k = 0; k < -n; ++k) h = cx_log(h, policy);
  for (int k = 0; k < n; ++k) h = cx_exp(h);
  return h;
}

// Neville tableau evaluated at s = 0.
class Extrapolator {
 public:
  std::complex<double> add(double s, std::complex<double> q) {
    xs_.push_back(s);
    std::vector<std::complex<double>> next(xs_.size());
    std::size_t k = xs_.size() - 1;
    next[k] = q;
    for (std::size_t j = k; j-- > 0;)
      next[j] = (xs_[k] * row_[j] - xs_[j] * next[j + 1]) / (xs_[k] - xs_[j]);
    row_ = std::move(next);
    return row_.front();
  }

  void reset() {
    xs_.clear();
    row_.clear();
  }

 private:
  std::vector<double> xs_;
  std::vector<std::complex<double>> row_;
};

}  // namespace detail

/// Df(z) = f(z) + log f'(z) - z. D of a constant is Bottom.
inline JoinComplex vee_derivative(const Expr& f, const JoinComplex& z, const Context& ctx = {}) {
  detail::require_finite_point(z);
  JoinComplex fz = detail::apply_at(f, z, ctx);
  JoinComplex d0 = detail::apply_at(classic_derivative(f, ctx.var), z, ctx);
  return detail::descend(0, fz, d0, z, ctx.policy);
}

inline JoinComplex n_derivative_closed(OpLevel n, const Expr& f, const JoinComplex& z,
                                       const Context& ctx = {}) {
  int level = n.value();
  if (level >= 2)
    throw unsupported("no closed form for D_" + std::to_string(level) + "; use the limit method");
  detail::require_finite_point(z);
  JoinComplex d = detail::apply_at(classic_derivative(f, ctx.var), z, ctx);
  if (level == 0) return d;
  JoinComplex fz = detail::apply_at(f, z, ctx);
  if (level == 1) {
    if (fz.is_bottom() || fz.is_zero()) throw domain_error("D_1 needs f(z) != 0");
    return cx_exp(JoinComplex(z.value() * d.value() / fz.value()));
  }
  for (int m = 0; m > level; --m) d = detail::descend(m, fz, d, z, ctx.policy);
  return d;
}

inline DnResult n_derivative_limit(OpLevel n, const Expr& f, const JoinComplex& z,
                                   const LimitOptions& opts = {}, const Context& ctx = {}) {
  int level = n.value();
  detail::require_finite_point(z);
  std::vector<double> steps = opts.steps.empty() ? default_steps() : opts.steps;
  if (steps.size() < 2) throw domain_error("limit schedule needs at least two steps");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(steps[k] > 0.0) || !std::isfinite(steps[k]) || (k > 0 && steps[k] >= steps[k - 1]))
      throw domain_error("limit steps must be positive and strictly decreasing");
  }

  const BranchPolicy policy = ctx.policy;
  // Intermediate values stay unreduced so that z (+)_n h tends to z even
  // when some exponential of z leaves the principal strip.
  constexpr BranchPolicy raw = BranchPolicy::modulo_2pi;
  LimitDiagnostics diag;
  JoinComplex fz = detail::apply_at(f, z, ctx);
  detail::Extrapolator extrapolator;
  bool have_previous = false;
  std::complex<double> previous_q;

  for (double s : steps) {
    JoinComplex h = detail::conjugate_step(level, s, raw);
    JoinComplex zh = detail::cx_oplus_impl(level, z, h, raw);
    JoinComplex num = detail::cx_ominus_impl(level, detail::apply_at(f, zh, ctx), fz, raw);

    JoinComplex q = JoinComplex::bottom();
    if (level <= -2) {
      // Below -2 the level n+2 value under the final log is taken principal,
      // as in the closed form. At -2 it is a plain difference of complex
      // numbers and is used as computed.
      JoinComplex inner = detail::cx_ominus_impl(level + 2, cx_exp(num), cx_exp(h), raw);
      if (level < -2) inner = canonicalize(inner);
      bool cancels = level == -2 && !inner.is_bottom() &&
                     std::abs(inner.value()) <= opts.bottom_band * (1.0 + std::abs(cx_exp(h).value()));
      if (!cancels) q = cx_log(inner, raw);
    } else {
      q = detail::cx_ominus_impl(level + 1, num, h, raw);
    }

    // The outermost operation below level 0 is a logarithm, so q is only
    // defined modulo 2*pi*i; keep it on the sheet of its predecessor.
    if (!q.is_bottom() && level <= -1 && have_previous) {
      std::complex<double> v = q.value();
      v.imag(v.imag() - two_pi * std::round((v.imag() - previous_q.imag()) / two_pi));
      q = JoinComplex(v);
    }

    JoinComplex estimate = JoinComplex::bottom();
    if (q.is_bottom()) {
      extrapolator.reset();
      have_previous = false;
    } else {
      previous_q = q.value();
      have_previous = true;
      estimate = JoinComplex(extrapolator.add(s, q.value()));
    }

    diag.steps.push_back(s);
    diag.h_schedule.push_back(h);
    diag.quotients.push_back(q);
    diag.iterates.push_back(estimate);

    std::size_t m = diag.iterates.size();
    if (m >= 2) {
      diag.final_delta = distance(diag.iterates[m - 1], diag.iterates[m - 2]);
      if (diag.final_delta < opts.tolerance) {
        diag.converged = true;
        break;
      }
    }
  }

  if (!diag.converged) throw no_convergence(std::move(diag));
  // Only the log-valued levels carry a branch; D_0 and up are exact values.
  JoinComplex value = level <= -1 ? apply_policy(diag.iterates.back(), policy) : diag.iterates.back();
  return DnResult{value, Method::limit, std::move(diag)};
}

/// k-fold v-derivative, applied symbolically and evaluated once.
inline JoinComplex repeat_vee_derivative(int k, const Expr& f, const JoinComplex& z,
                                         const Context& ctx = {}) {
  if (k < 1) throw domain_error("repeat count must be positive");
  detail::require_finite_point(z);
  Expr g = f;
  for (int i = 0; i < k; ++i) g = simplify(expand_n_derivative(-1, g, ctx.var));
  return apply_policy(detail::apply_at(g, z, ctx), ctx.policy);
}

/// (d/dx, d/dy)(x v y) = (e^x, e^y) / (e^x + e^y), as a pair of logistics.
inline std::pair<double, double> join_partials(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw domain_error("join_partials needs finite arguments");
  double d = x - y;
  double t = std::exp(-std::abs(d));
  double big = 1.0 / (1.0 + t);
  double small = t / (1.0 + t);
  return d >= 0.0 ? std::pair{big, small} : std::pair{small, big};
}

/// (df/dx) v (df/dy) at (x, y) with symbolic partials, in real mode.
inline ExtReal join_of_partials(const Expr& f, double x, double y, const Env& constants = {}) {
  Env env = constants;
  env.insert_or_assign("x", JoinComplex(x));
  env.insert_or_assign("y", JoinComplex(y));
  ExtReal fx = eval_real(classic_derivative(f, "x"), env);
  ExtReal fy = eval_real(classic_derivative(f, "y"), env);
  return join(fx, fy);
}

namespace detail {

inline JoinComplex eval_derivative(int level, const Expr& f, const Env& env, const EvalOptions& opts) {
  Context ctx{default_variable(f), env, opts.policy, opts.bounds};
  JoinComplex z(0.0);
  if (auto it = env.find(ctx.var); it != env.end()) z = it->second;
  else if (depends_on(f, ctx.var)) throw unbound_variable(ctx.var);
  OpLevel n(level, opts.bounds);
  if (level <= 1) return n_derivative_closed(n, f, z, ctx);
  return n_derivative_limit(n, f, z, LimitOptions{}, ctx).value;
}

}  // namespace detail

}  // namespace opchain
