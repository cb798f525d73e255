#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "klow/error.hpp"
#include "klow/finite_ring.hpp"
#include "klow/kone.hpp"
#include "klow/lazy_matrix.hpp"

namespace klow {

/// Element sum c_pq alpha*^p alpha^q of the Toeplitz ring over a finite
/// unital coefficient ring; the support never stores a zero coefficient.
struct ToeplitzElement {
  RingPtr ring;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Elem> support;

  explicit ToeplitzElement(RingPtr r = nullptr) : ring(std::move(r)) {}

  static ToeplitzElement monomial(const RingPtr& r, std::uint32_t p, std::uint32_t q, std::optional<Elem> c = std::nullopt) {
    ToeplitzElement t(r);
    t.add_term(p, q, c ? *c : r->one());
    return t;
  }
  static ToeplitzElement scalar(const RingPtr& r, Elem c) { return monomial(r, 0, 0, c); }
  static ToeplitzElement one(const RingPtr& r) { return monomial(r, 0, 0); }
  static ToeplitzElement zero(const RingPtr& r) { return ToeplitzElement(r); }
  static ToeplitzElement alpha(const RingPtr& r) { return monomial(r, 0, 1); }
  static ToeplitzElement alpha_star(const RingPtr& r) { return monomial(r, 1, 0); }
  /// e_pq = alpha*^{p-1} alpha^{q-1} - alpha*^p alpha^q, p, q >= 1.
  static ToeplitzElement matrix_unit(const RingPtr& r, std::uint32_t p, std::uint32_t q) {
    if (p == 0 || q == 0) throw BadInput("matrix units are indexed from 1");
    ToeplitzElement t = monomial(r, p - 1, q - 1);
    t.add_term(p, q, r->neg(r->one()));
    return t;
  }

  void add_term(std::uint32_t p, std::uint32_t q, Elem c) {
    if (!ring->has_one()) throw NotUnital(ring->name());
    auto it = support.find({p, q});
    const Elem v = it == support.end() ? c : ring->add(it->second, c);
    if (v == ring->zero()) {
      if (it != support.end()) support.erase(it);
    } else {
      support[{p, q}] = v;
    }
  }

  bool is_zero() const { return support.empty(); }
  bool operator==(const ToeplitzElement& o) const { return support == o.support; }
  bool operator!=(const ToeplitzElement& o) const { return !(*this == o); }

  std::string str() const {
    if (support.empty()) return "0";
    std::string s;
    for (const auto& [pq, c] : support) {
      if (!s.empty()) s += " + ";
      s += std::to_string(c) + "*a*^" + std::to_string(pq.first) + "a^" + std::to_string(pq.second);
    }
    return s;
  }
};

inline ToeplitzElement operator+(const ToeplitzElement& a, const ToeplitzElement& b) {
  ToeplitzElement out = a;
  for (const auto& [pq, c] : b.support) out.add_term(pq.first, pq.second, c);
  return out;
}

inline ToeplitzElement operator-(const ToeplitzElement& a) {
  ToeplitzElement out(a.ring);
  for (const auto& [pq, c] : a.support) out.add_term(pq.first, pq.second, a.ring->neg(c));
  return out;
}

inline ToeplitzElement operator-(const ToeplitzElement& a, const ToeplitzElement& b) { return a + (-b); }

inline ToeplitzElement scale(Elem c, const ToeplitzElement& a) {
  ToeplitzElement out(a.ring);
  for (const auto& [pq, v] : a.support) out.add_term(pq.first, pq.second, a.ring->mul(c, v));
  return out;
}

/// (a*^p a^q)(a*^r a^s) = a*^{p + max(r-q,0)} a^{s + max(q-r,0)}, extended
/// bilinearly; coefficients multiply in order.
inline ToeplitzElement operator*(const ToeplitzElement& x, const ToeplitzElement& y) {
  ToeplitzElement out(x.ring);
  for (const auto& [pq, c] : x.support)
    for (const auto& [rs, d] : y.support) {
      const auto [p, q] = pq;
      const auto [r, s] = rs;
      out.add_term(p + (r > q ? r - q : 0), s + (q > r ? q - r : 0), x.ring->mul(c, d));
    }
  return out;
}

/// A coefficient times a word in alpha (true) and alpha* (false).
struct ToeplitzWord {
  Elem coeff = 0;
  std::vector<bool> letters;
};

/// Rewrites alpha alpha* -> 1 until no occurrence is left. With `rng` the
/// occurrence removed at each step is chosen at random, else leftmost.
inline ToeplitzElement normal_form(const RingPtr& r, const ToeplitzWord& w, std::mt19937* rng = nullptr) {
  std::vector<bool> s = w.letters;
  while (true) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i] && !s[i + 1]) hits.push_back(i);
    if (hits.empty()) break;
    const std::size_t at = rng ? hits[(*rng)() % hits.size()] : hits.front();
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(at), s.begin() + static_cast<std::ptrdiff_t>(at + 2));
  }
  // irreducible words are alpha*^p alpha^q
  std::uint32_t p = 0, q = 0;
  for (bool a : s) (a ? q : p) += 1;
  return ToeplitzElement::monomial(r, p, q, w.coeff);
}

/// alpha -> sum e_{i,i+1}, alpha* -> sum e_{i+1,i}, as a product expression.
inline LazyMatrix embed_toeplitz(const ToeplitzElement& t) {
  const RingPtr& r = t.ring;
  LazyMatrix out = LazyMatrix::zero(r);
  const LazyMatrix a = LazyMatrix::shift(r), as = LazyMatrix::shift_star(r);
  bool first = true;
  for (const auto& [pq, c] : t.support) {
    LazyMatrix term = scale(c, power(as, pq.first) * power(a, pq.second));
    out = first ? term : out + term;
    first = false;
  }
  return out;
}

/// Band-model window: entry (i, j) collects c_pq over i - p = j - q >= 1.
inline RMatrix band_window(const ToeplitzElement& t, std::size_t n) {
  RMatrix m(t.ring, n);
  for (const auto& [pq, c] : t.support)
    for (std::size_t i = 1; i + pq.first <= n && i + pq.second <= n; ++i) {
      Elem& e = m(i + pq.first - 1, i + pq.second - 1);
      e = t.ring->add(e, c);
    }
  return m;
}

/// 2 x 2 matrices over the Toeplitz ring, row-major.
struct Toeplitz2 {
  std::array<ToeplitzElement, 4> e;

  static Toeplitz2 diag(const ToeplitzElement& a, const ToeplitzElement& b) {
    return {{a, ToeplitzElement::zero(a.ring), ToeplitzElement::zero(a.ring), b}};
  }
  bool operator==(const Toeplitz2& o) const { return e == o.e; }
  std::string str() const {
    return "[[" + e[0].str() + ", " + e[1].str() + "], [" + e[2].str() + ", " + e[3].str() + "]]";
  }
};

inline Toeplitz2 operator*(const Toeplitz2& x, const Toeplitz2& y) {
  return {{x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3], x.e[2] * y.e[0] + x.e[3] * y.e[2],
           x.e[2] * y.e[1] + x.e[3] * y.e[3]}};
}

/// Q = [[1 - a* a, a*], [a, 0]].
inline Toeplitz2 q_matrix(const RingPtr& r) {
  return {{ToeplitzElement::one(r) - ToeplitzElement::alpha_star(r) * ToeplitzElement::alpha(r),
           ToeplitzElement::alpha_star(r), ToeplitzElement::alpha(r), ToeplitzElement::zero(r)}};
}

/// Q^2 = 1 and Q diag(a e11, a 1) Q = diag(a 1, 0) for every a in r.
inline std::vector<IdentityCheck> q_involution_check(const RingPtr& r) {
  if (!r->has_one()) throw NotUnital(r->name());
  const Toeplitz2 q = q_matrix(r);
  const ToeplitzElement one = ToeplitzElement::one(r), zero = ToeplitzElement::zero(r);
  std::vector<IdentityCheck> out;
  const Toeplitz2 q2 = q * q;
  out.push_back({"Q^2 = 1", q2 == Toeplitz2::diag(one, one), q2 == Toeplitz2::diag(one, one) ? "" : q2.str()});
  IdentityCheck conj{"Q diag(j(a), j_inf(a)) Q = diag(j_inf(a), 0)", true, ""};
  const ToeplitzElement e11 = ToeplitzElement::matrix_unit(r, 1, 1);
  for (Elem a = 0; a < r->order() && conj.pass; ++a) {
    const Toeplitz2 lhs = q * Toeplitz2::diag(scale(a, e11), ToeplitzElement::scalar(r, a)) * q;
    const Toeplitz2 rhs = Toeplitz2::diag(ToeplitzElement::scalar(r, a), zero);
    if (!(lhs == rhs)) {
      conj.pass = false;
      conj.witness = "a=" + std::to_string(a) + ": " + lhs.str();
    }
  }
  out.push_back(conj);
  return out;
}

/// e_pq e_rs = delta_qr e_ps for 1 <= p, q, r, s <= bound.
inline IdentityCheck matrix_unit_check(const RingPtr& r, std::uint32_t bound) {
  IdentityCheck c{"e_pq e_rs = delta_qr e_ps (p,q,r,s <= " + std::to_string(bound) + ")", true, ""};
  for (std::uint32_t p = 1; p <= bound; ++p)
    for (std::uint32_t q = 1; q <= bound; ++q)
      for (std::uint32_t s1 = 1; s1 <= bound; ++s1)
        for (std::uint32_t s = 1; s <= bound; ++s) {
          const auto lhs = ToeplitzElement::matrix_unit(r, p, q) * ToeplitzElement::matrix_unit(r, s1, s);
          const auto rhs = q == s1 ? ToeplitzElement::matrix_unit(r, p, s) : ToeplitzElement::zero(r);
          if (lhs != rhs) {
            c.pass = false;
            c.witness = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " r=" + std::to_string(s1) +
                        " s=" + std::to_string(s) + ": " + lhs.str();
            return c;
          }
        }
  return c;
}

inline ToeplitzElement random_toeplitz(const RingPtr& r, std::mt19937& rng, std::uint32_t max_exp, std::size_t terms) {
  ToeplitzElement t(r);
  for (std::size_t i = 0; i < terms; ++i)
    t.add_term(static_cast<std::uint32_t>(rng() % (max_exp + 1)), static_cast<std::uint32_t>(rng() % (max_exp + 1)),
               static_cast<Elem>(rng() % r->order()));
  return t;
}

/// The Toeplitz checks behind `verify toeplitz`.
inline std::vector<IdentityCheck> toeplitz_checks(const RingPtr& r, std::size_t window = 16, std::uint32_t seed = 1) {
  std::vector<IdentityCheck> out;
  {
    const auto x = ToeplitzElement::alpha(r) * ToeplitzElement::alpha_star(r);
    out.push_back({"alpha alpha* = 1", x == ToeplitzElement::one(r), x.str()});
    const auto y = ToeplitzElement::alpha_star(r) * ToeplitzElement::alpha(r);
    const bool irreducible = y == ToeplitzElement::monomial(r, 1, 1) && y != ToeplitzElement::one(r);
    out.push_back({"alpha* alpha is a normal form other than 1", irreducible, y.str()});
  }
  out.push_back(matrix_unit_check(r, 6));
  {
    IdentityCheck c{"embed(e_pq) is the matrix unit e_pq (" + std::to_string(window) + "-window)", true, ""};
    for (std::uint32_t p = 1; p <= window && c.pass; ++p)
      for (std::uint32_t q = 1; q <= window && c.pass; ++q) {
        const RMatrix w = window_eval(embed_toeplitz(ToeplitzElement::matrix_unit(r, p, q)), window);
        RMatrix want(r, window);
        want(p - 1, q - 1) = r->one();
        if (w != want) {
          c.pass = false;
          c.witness = "p=" + std::to_string(p) + " q=" + std::to_string(q) + ": " + w.str();
        }
      }
    out.push_back(c);
  }
  std::mt19937 rng(seed);
  {
    IdentityCheck c{"embed agrees with the band model (" + std::to_string(window) + "-window, 100 random elements)", true, ""};
    for (int t = 0; t < 100 && c.pass; ++t) {
      const auto x = random_toeplitz(r, rng, 4, 4);
      if (window_eval(embed_toeplitz(x), window) != band_window(x, window)) {
        c.pass = false;
        c.witness = x.str();
      }
    }
    out.push_back(c);
  }
  {
    IdentityCheck c{"embed multiplicative on the certified sub-window (100 random pairs)", true, ""};
    for (int t = 0; t < 100 && c.pass; ++t) {
      const auto x = random_toeplitz(r, rng, 3, 3), y = random_toeplitz(r, rng, 3, 3);
      const LazyMatrix ex = embed_toeplitz(x), ey = embed_toeplitz(y);
      const std::size_t m = certified_product_window(ex, ey, window);
      const RMatrix prod = window_eval(ex, window) * window_eval(ey, window);
      const RMatrix want = window_eval(embed_toeplitz(x * y), window);
      for (std::size_t i = 0; i < m && c.pass; ++i)
        for (std::size_t j = 0; j < m && c.pass; ++j)
          if (prod(i, j) != want(i, j)) {
            c.pass = false;
            c.witness = x.str() + " times " + y.str() + " at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
          }
    }
    out.push_back(c);
  }
  {
    IdentityCheck c{"normal form confluent (random words up to length 10, two orders)", true, ""};
    for (int t = 0; t < 500 && c.pass; ++t) {
      ToeplitzWord w{static_cast<Elem>(rng() % r->order()), {}};
      const std::size_t len = rng() % 11;
      for (std::size_t i = 0; i < len; ++i) w.letters.push_back(rng() % 2 == 0);
      const auto a = normal_form(r, w, &rng), b = normal_form(r, w, &rng);
      // the word as a product of generators must agree with the rewritten form
      ToeplitzElement prod = ToeplitzElement::scalar(r, w.coeff);
      for (bool l : w.letters) prod = prod * (l ? ToeplitzElement::alpha(r) : ToeplitzElement::alpha_star(r));
      if (a != b || a != prod) {
        c.pass = false;
        c.witness = a.str() + " vs " + b.str() + " vs " + prod.str();
      }
    }
    out.push_back(c);
  }
  for (auto& q : q_involution_check(r)) out.push_back(std::move(q));
  return out;
}

}  // namespace klow
