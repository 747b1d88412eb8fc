#pragma once

/**
 * @file joinalg.hpp
 * @brief Join-algebra combinatorics: log-binomial weights, the binomial
 *        expansion of n(x v y), and join polynomials.
 *
 * In the join algebra + plays the role of multiplication and v the role of
 * addition, so an ordinary polynomial sum_k a_k x^k becomes
 *
 *     p(z) = (a_n + n z) v (a_{n-1} + (n-1) z) v ... v (a_1 + z) v a_0
 *
 * and binomial coefficients enter as ln C(n,k) offsets.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "errors.hpp"
#include "numtower.hpp"

namespace opchain {

/// ln C(n, k) via log-gamma; stays finite far beyond factorial overflow.
inline double log_binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n)
    throw domain_error("log_binomial needs 0 <= k <= n (got n=" + std::to_string(n) +
                       ", k=" + std::to_string(k) + ")");
  if (k == 0 || k == n) return 0.0;
  double nn = static_cast<double>(n);
  double kk = static_cast<double>(k);
  double r = std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
  if (!std::isfinite(r)) throw overflow_error("ln C(n,k) is not representable");
  return r;
}

/// Right-hand side of n(x v y) = V_{k=0..n} [ ln C(n,k) + (n-k) x + k y ].
inline ExtReal binomial_rhs(long n, ExtReal x, ExtReal y) {
  if (n < 1) throw domain_error("binomial expansion needs n >= 1");
  ExtReal acc = ExtReal::neg_inf();
  for (long k = 0; k <= n; ++k) {
    // (n-k) x + k y with the convention 0 * (-inf) = 0 for absent terms.
    ExtReal term = log_binomial(n, k);
    if (n - k > 0) term = detail::oplus_real(0, term, static_cast<double>(n - k) * x.value());
    if (k > 0) term = detail::oplus_real(0, term, static_cast<double>(k) * y.value());
    acc = join(acc, term);
  }
  return acc;
}

/// p(z) = V_k (a_k + k z). Bottom coefficients mark absent terms.
class JoinPolynomial {
 public:
  JoinPolynomial() = default;
  explicit JoinPolynomial(std::vector<JoinComplex> coefficients)
      : coeffs_(std::move(coefficients)) {}

  const std::vector<JoinComplex>& coefficients() const { return coeffs_; }

  // Index of the last non-Bottom coefficient, or -1 when every term is absent.
  long degree() const {
    for (std::size_t k = coeffs_.size(); k-- > 0;)
      if (!coeffs_[k].is_bottom()) return static_cast<long>(k);
    return -1;
  }

 private:
  std::vector<JoinComplex> coeffs_;
};

inline JoinComplex poly_eval(const JoinPolynomial& p, const JoinComplex& z,
                             BranchPolicy policy = BranchPolicy::principal) {
  JoinComplex acc = JoinComplex::bottom();
  const auto& a = p.coefficients();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].is_bottom()) continue;
    JoinComplex term = a[k];
    if (k > 0) {
      if (z.is_bottom()) continue;
      term = JoinComplex(a[k].value() + static_cast<double>(k) * z.value());
    }
    acc = cx_join(acc, term, policy);
  }
  return acc;
}

}  // namespace opchain
