#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "klow/kone.hpp"
#include "klow/lazy_matrix.hpp"

namespace klow {

namespace detail {

inline IdentityCheck window_identity(std::string name, const LazyMatrix& lhs, const LazyMatrix& rhs, std::size_t n) {
  auto diff = window_difference(lhs, rhs, n);
  return {std::move(name), !diff.has_value(), diff.value_or("")};
}

inline std::size_t floor_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{2} << k) <= n) ++k;
  return k;
}

}  // namespace detail

/// Sum-ring identities for alpha_i, beta_i on the exact N-window. Entries
/// are evaluated through finite supports over all of N x N, so no window
/// truncation enters; the window only limits which entries are compared.
inline std::vector<IdentityCheck> sum_ring_identities(const RingPtr& r, std::size_t n) {
  if (n < 4) throw BadInput("sum-ring window must be at least 4");
  const auto a0 = LazyMatrix::alpha0(r), a1 = LazyMatrix::alpha1(r);
  const auto b0 = LazyMatrix::beta0(r), b1 = LazyMatrix::beta1(r);
  const auto one = LazyMatrix::identity(r), zero = LazyMatrix::zero(r);
  std::vector<IdentityCheck> out;
  out.push_back(detail::window_identity("alpha_0 beta_0 = 1", a0 * b0, one, n));
  out.push_back(detail::window_identity("alpha_1 beta_1 = 1", a1 * b1, one, n));
  out.push_back(detail::window_identity("beta_0 alpha_0 + beta_1 alpha_1 = 1", b0 * a0 + b1 * a1, one, n));
  out.push_back(detail::window_identity("alpha_1 beta_0 = 0", a1 * b0, zero, n));
  out.push_back(detail::window_identity("alpha_0 beta_1 = 0", a0 * b1, zero, n));
  const std::size_t top = detail::floor_log2(n);
  IdentityCheck delta{"alpha_0 alpha_1^i beta_1^j beta_0 = delta_ij (i,j <= " + std::to_string(top) + ")", true, ""};
  for (std::size_t i = 0; i <= top && delta.pass; ++i)
    for (std::size_t j = 0; j <= top && delta.pass; ++j) {
      auto c = detail::window_identity("", a0 * power(a1, i) * power(b1, j) * b0, i == j ? one : zero, n);
      if (!c.pass) {
        delta.pass = false;
        delta.witness = "i=" + std::to_string(i) + " j=" + std::to_string(j) + " " + c.witness;
      }
    }
  out.push_back(delta);
  return out;
}

/// Identities of [+] and phi^infinity on the N-window.
inline std::vector<IdentityCheck> infinite_sum_identities(const RingPtr& r, std::size_t n) {
  const auto one = LazyMatrix::identity(r), zero = LazyMatrix::zero(r);
  const auto e11 = LazyMatrix::unit(r, 1, 1), e12 = LazyMatrix::unit(r, 1, 2), e21 = LazyMatrix::unit(r, 2, 1);
  std::vector<IdentityCheck> out;
  out.push_back(detail::window_identity("1 [+] 1 = 1", box_plus(one, one), one, n));
  out.push_back(detail::window_identity("0 [+] 0 = 0", box_plus(zero, zero), zero, n));
  {
    // (a [+] b)(c [+] d) = ac [+] bd
    const auto a = e11 + e12, b = e21, c = e12 + e21, d = one;
    out.push_back(detail::window_identity("[+] multiplicative", box_plus(a, b) * box_plus(c, d),
                                          box_plus(a * c, b * d), n));
  }
  for (const auto& a : {e11, e12}) {
    const auto inf = phi_infinity(a);
    out.push_back(detail::window_identity(a.describe() + " [+] phi_inf(" + a.describe() + ") = phi_inf(" + a.describe() + ")",
                                          box_plus(a, inf), inf, n));
  }
  {
    const auto x = e11 + e12, y = e21 + scale(r->integer(2), e12);
    out.push_back(detail::window_identity("phi_inf multiplicative", phi_infinity(x) * phi_infinity(y), phi_infinity(x * y), n));
  }
  return out;
}

/// All cone identities plus a support-soundness probe of each expression.
inline std::vector<IdentityCheck> cone_checks(const RingPtr& r, std::size_t n, std::uint32_t seed = 1) {
  auto out = sum_ring_identities(r, n);
  for (auto& c : infinite_sum_identities(r, n)) out.push_back(std::move(c));
  const auto a0 = LazyMatrix::alpha0(r), a1 = LazyMatrix::alpha1(r);
  const auto b0 = LazyMatrix::beta0(r), b1 = LazyMatrix::beta1(r);
  const std::vector<LazyMatrix> exprs{a0 * b0, b0 * a0 + b1 * a1, a0 * a1 * b1 * b0,
                                      box_plus(LazyMatrix::unit(r, 1, 2), phi_infinity(LazyMatrix::unit(r, 1, 2)))};
  std::mt19937 rng(seed);
  IdentityCheck probe{"row/column supports sound (1000 probes per expression)", true, ""};
  for (const auto& e : exprs)
    if (auto w = probe_supports(e, 1000, 4 * n, rng); w && probe.pass) {
      probe.pass = false;
      probe.witness = *w;
    }
  out.push_back(probe);
  return out;
}

}  // namespace klow
