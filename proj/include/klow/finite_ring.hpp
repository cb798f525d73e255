#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "klow/error.hpp"

namespace klow {

/// Ring elements are carrier indices 0..order-1.
using Elem = std::uint32_t;

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

/// A finite ring presented by addition and multiplication tables.
///
/// All ring axioms are checked exhaustively when the ring is built; the
/// object is immutable afterwards.
class FiniteRing {
 public:
  static constexpr std::size_t max_order = 1024;

  /// Validates the tables and builds the ring. Throws AxiomViolation.
  static RingPtr from_tables(std::string name, std::size_t order, std::vector<Elem> add, std::vector<Elem> mul,
                             Elem zero, std::optional<Elem> one, bool finite_truncation = false) {
    if (order == 0 || order > max_order) throw BadInput("ring order must be in [1, " + std::to_string(max_order) + "]");
    if (add.size() != order * order || mul.size() != order * order)
      throw BadInput("ring tables must be " + std::to_string(order) + "x" + std::to_string(order));
    auto r = std::shared_ptr<FiniteRing>(new FiniteRing());
    r->name_ = std::move(name);
    r->order_ = order;
    r->add_ = std::move(add);
    r->mul_ = std::move(mul);
    r->zero_ = zero;
    r->one_ = one;
    r->finite_truncation_ = finite_truncation;
    r->validate();
    r->derive();
    return r;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t order() const noexcept { return order_; }
  Elem zero() const noexcept { return zero_; }
  bool has_one() const noexcept { return one_.has_value(); }
  Elem one() const {
    if (!one_) throw NotUnital(name_);
    return *one_;
  }
  std::optional<Elem> maybe_one() const noexcept { return one_; }
  /// Additive exponent: least N with N*x = 0 for all x.
  std::uint64_t char_exponent() const noexcept { return char_exponent_; }
  bool finite_truncation() const noexcept { return finite_truncation_; }

  Elem add(Elem a, Elem b) const noexcept { return add_[a * order_ + b]; }
  Elem mul(Elem a, Elem b) const noexcept { return mul_[a * order_ + b]; }
  Elem neg(Elem a) const noexcept { return neg_[a]; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

  /// n * a for an integer n (negative allowed).
  Elem times(long long n, Elem a) const noexcept {
    const long long ord = static_cast<long long>(additive_order_[a]);
    long long k = ((n % ord) + ord) % ord;
    Elem acc = zero_;
    for (long long i = 0; i < k; ++i) acc = add(acc, a);
    return acc;
  }

  /// n * 1 for a unital ring.
  Elem integer(long long n) const { return times(n, one()); }

  std::uint64_t additive_order(Elem a) const noexcept { return additive_order_[a]; }

  const std::vector<Elem>& add_table() const noexcept { return add_; }
  const std::vector<Elem>& mul_table() const noexcept { return mul_; }

  bool is_commutative() const noexcept {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = a + 1; b < order_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// Units, sorted. Empty for a ring without unit.
  const std::vector<Elem>& units() const noexcept { return units_; }
  bool is_unit(Elem a) const noexcept { return inverse_[a] != npos; }
  std::optional<Elem> inverse(Elem a) const noexcept {
    if (inverse_[a] == npos) return std::nullopt;
    return inverse_[a];
  }

  /// A small generating set of (R,+), chosen greedily in carrier order.
  const std::vector<Elem>& additive_generators() const noexcept { return additive_generators_; }
  /// A small generating set of the unit group, chosen greedily in carrier order.
  const std::vector<Elem>& unit_generators() const noexcept { return unit_generators_; }

  /// Content hash of the tables (hex), used for cache keys and report digests.
  const std::string& digest() const noexcept { return digest_; }

 private:
  static constexpr Elem npos = static_cast<Elem>(-1);

  FiniteRing() = default;

  void validate() const {
    const Elem m = static_cast<Elem>(order_);
    for (Elem v : add_)
      if (v >= m) throw BadInput("addition table entry out of range in ring '" + name_ + "'");
    for (Elem v : mul_)
      if (v >= m) throw BadInput("multiplication table entry out of range in ring '" + name_ + "'");
    if (zero_ >= m) throw BadInput("zero out of range");
    if (one_ && *one_ >= m) throw BadInput("one out of range");
    for (Elem a = 0; a < m; ++a) {
      if (add(zero_, a) != a || add(a, zero_) != a) throw AxiomViolation("additive identity", zero_, a, 0);
      bool has_neg = false;
      for (Elem b = 0; b < m && !has_neg; ++b) has_neg = add(a, b) == zero_;
      if (!has_neg) throw AxiomViolation("additive inverse", a, 0, 0);
      for (Elem b = 0; b < m; ++b)
        if (add(a, b) != add(b, a)) throw AxiomViolation("additive commutativity", a, b, 0);
    }
    for (Elem a = 0; a < m; ++a)
      for (Elem b = 0; b < m; ++b) {
        const Elem ab = add(a, b), mab = mul(a, b);
        for (Elem c = 0; c < m; ++c) {
          if (add(ab, c) != add(a, add(b, c))) throw AxiomViolation("additive associativity", a, b, c);
          if (mul(mab, c) != mul(a, mul(b, c))) throw AxiomViolation("multiplicative associativity", a, b, c);
          if (mul(a, add(b, c)) != add(mab, mul(a, c))) throw AxiomViolation("left distributivity", a, b, c);
          if (mul(ab, c) != add(mul(a, c), mul(b, c))) throw AxiomViolation("right distributivity", a, b, c);
        }
      }
    if (one_)
      for (Elem a = 0; a < m; ++a)
        if (mul(*one_, a) != a || mul(a, *one_) != a) throw AxiomViolation("multiplicative identity", *one_, a, 0);
  }

  void derive() {
    const Elem m = static_cast<Elem>(order_);
    neg_.assign(m, zero_);
    for (Elem a = 0; a < m; ++a)
      for (Elem b = 0; b < m; ++b)
        if (add(a, b) == zero_) {
          neg_[a] = b;
          break;
        }
    additive_order_.assign(m, 1);
    char_exponent_ = 1;
    for (Elem a = 0; a < m; ++a) {
      std::uint64_t k = 1;
      Elem acc = a;
      while (acc != zero_) {
        acc = add(acc, a);
        ++k;
      }
      additive_order_[a] = k;
      char_exponent_ = std::lcm(char_exponent_, k);
    }
    inverse_.assign(m, npos);
    if (one_) {
      for (Elem a = 0; a < m; ++a)
        for (Elem b = 0; b < m; ++b)
          if (mul(a, b) == *one_ && mul(b, a) == *one_) {
            inverse_[a] = b;
            units_.push_back(a);
            break;
          }
    }
    // greedy additive generators
    std::vector<char> span(m, 0);
    span[zero_] = 1;
    for (Elem g = 0; g < m; ++g) {
      if (span[g]) continue;
      additive_generators_.push_back(g);
      std::vector<Elem> frontier;
      for (Elem x = 0; x < m; ++x)
        if (span[x]) frontier.push_back(x);
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        const Elem y = add(frontier[i], g);
        if (!span[y]) {
          span[y] = 1;
          frontier.push_back(y);
        }
      }
    }
    // greedy unit-group generators
    if (one_) {
      std::vector<char> in(m, 0);
      in[*one_] = 1;
      for (Elem u : units_) {
        if (in[u]) continue;
        unit_generators_.push_back(u);
        std::vector<Elem> frontier;
        for (Elem x = 0; x < m; ++x)
          if (in[x]) frontier.push_back(x);
        for (std::size_t i = 0; i < frontier.size(); ++i)
          for (Elem g : unit_generators_) {
            const Elem y = mul(frontier[i], g);
            if (!in[y]) {
              in[y] = 1;
              frontier.push_back(y);
            }
          }
      }
    }
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(order_);
    mix(zero_);
    mix(one_ ? *one_ + 1 : 0);
    for (Elem v : add_) mix(v);
    for (Elem v : mul_) mix(v);
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    digest_ = os.str();
  }

  std::string name_;
  std::size_t order_ = 0;
  std::vector<Elem> add_, mul_, neg_;
  Elem zero_ = 0;
  std::optional<Elem> one_;
  bool finite_truncation_ = false;
  std::uint64_t char_exponent_ = 1;
  std::vector<std::uint64_t> additive_order_;
  std::vector<Elem> inverse_;
  std::vector<Elem> units_;
  std::vector<Elem> additive_generators_;
  std::vector<Elem> unit_generators_;
  std::string digest_;
};

/// A map of carriers; `is_ring_hom` checks it exhaustively.
struct RingMap {
  RingPtr source;
  RingPtr target;
  std::vector<Elem> images;

  Elem operator()(Elem x) const { return images.at(x); }

  bool is_additive() const {
    for (Elem a = 0; a < source->order(); ++a)
      for (Elem b = 0; b < source->order(); ++b)
        if (images[source->add(a, b)] != target->add(images[a], images[b])) return false;
    return true;
  }
  bool is_multiplicative() const {
    for (Elem a = 0; a < source->order(); ++a)
      for (Elem b = 0; b < source->order(); ++b)
        if (images[source->mul(a, b)] != target->mul(images[a], images[b])) return false;
    return true;
  }
  bool is_ring_hom() const { return images.size() == source->order() && is_additive() && is_multiplicative(); }
  bool is_unital() const {
    return source->has_one() && target->has_one() && images[source->one()] == target->one();
  }
  bool is_surjective() const {
    std::vector<char> hit(target->order(), 0);
    for (Elem v : images) hit[v] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }
};

namespace rings {

inline RingPtr zmod(std::size_t n, std::string name = {}) {
  if (n == 0) throw BadInput("zmod(0) is infinite");
  std::vector<Elem> add(n * n), mul(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      add[a * n + b] = static_cast<Elem>((a + b) % n);
      mul[a * n + b] = static_cast<Elem>((a * b) % n);
    }
  if (name.empty()) name = "Z" + std::to_string(n);
  return FiniteRing::from_tables(std::move(name), n, std::move(add), std::move(mul), 0, n == 1 ? Elem{0} : Elem{1});
}

/// GF(p^k) as F_p[x]/(poly); `poly` holds k+1 coefficients, low to high, monic.
/// Element index = sum c_i p^i.
inline RingPtr gf(std::size_t p, std::size_t k, const std::vector<long>& poly, std::string name = {}) {
  if (p < 2 || k < 1) throw BadInput("gf: need p >= 2 and k >= 1");
  if (poly.size() != k + 1) throw BadInput("gf: polynomial must have k+1 coefficients");
  if (((poly[k] % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p) != 1)
    throw BadInput("gf: polynomial must be monic");
  std::size_t q = 1;
  for (std::size_t i = 0; i < k; ++i) q *= p;
  if (q > FiniteRing::max_order) throw BadInput("gf: field too large");
  auto digits = [&](std::size_t x) {
    std::vector<long> d(k);
    for (std::size_t i = 0; i < k; ++i) {
      d[i] = static_cast<long>(x % p);
      x /= p;
    }
    return d;
  };
  auto index = [&](const std::vector<long>& d) {
    std::size_t x = 0;
    for (std::size_t i = k; i-- > 0;) x = x * p + static_cast<std::size_t>(((d[i] % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p));
    return static_cast<Elem>(x);
  };
  std::vector<Elem> add(q * q), mul(q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) {
      auto da = digits(a), db = digits(b);
      std::vector<long> s(k);
      for (std::size_t i = 0; i < k; ++i) s[i] = da[i] + db[i];
      add[a * q + b] = index(s);
      std::vector<long> prod(2 * k, 0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % static_cast<long>(p);
      for (std::size_t d = 2 * k - 1; d >= k; --d) {
        const long c = prod[d];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= k; ++i)
          prod[d - k + i] = ((prod[d - k + i] - c * poly[i]) % static_cast<long>(p) + static_cast<long>(p)) % static_cast<long>(p);
      }
      mul[a * q + b] = index(std::vector<long>(prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(k)));
    }
  if (name.empty()) name = "F" + std::to_string(q);
  auto r = FiniteRing::from_tables(name, q, std::move(add), std::move(mul), 0, Elem{1});
  for (Elem a = 1; a < q; ++a)
    for (Elem b = 1; b < q; ++b)
      if (r->mul(a, b) == 0)
        throw NotIrreducible("gf(" + std::to_string(p) + "," + std::to_string(k) +
                             "): polynomial is not irreducible over F_p (zero divisors " + std::to_string(a) + "*" +
                             std::to_string(b) + ")");
  return r;
}

/// M_n(base); element index = sum over row-major positions t of entry_t * m^t.
inline RingPtr matrix_ring(const RingPtr& base, std::size_t n, std::string name = {}) {
  const std::size_t m = base->order();
  std::size_t q = 1;
  for (std::size_t i = 0; i < n * n; ++i) {
    q *= m;
    if (q > FiniteRing::max_order) throw BadInput("matrix_ring: ring too large");
  }
  auto decode = [&](std::size_t x) {
    std::vector<Elem> e(n * n);
    for (auto& v : e) {
      v = static_cast<Elem>(x % m);
      x /= m;
    }
    return e;
  };
  auto encode = [&](const std::vector<Elem>& e) {
    std::size_t x = 0;
    for (std::size_t t = e.size(); t-- > 0;) x = x * m + e[t];
    return static_cast<Elem>(x);
  };
  std::vector<Elem> add(q * q), mul(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    const auto ea = decode(a);
    for (std::size_t b = 0; b < q; ++b) {
      const auto eb = decode(b);
      std::vector<Elem> s(n * n), p(n * n, base->zero());
      for (std::size_t t = 0; t < n * n; ++t) s[t] = base->add(ea[t], eb[t]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < n; ++l)
            p[i * n + j] = base->add(p[i * n + j], base->mul(ea[i * n + l], eb[l * n + j]));
      add[a * q + b] = encode(s);
      mul[a * q + b] = encode(p);
    }
  }
  std::vector<Elem> z(n * n, base->zero());
  std::optional<Elem> one;
  if (base->has_one()) {
    std::vector<Elem> id(n * n, base->zero());
    for (std::size_t i = 0; i < n; ++i) id[i * n + i] = base->one();
    one = encode(id);
  }
  if (name.empty()) name = "M" + std::to_string(n) + base->name();
  return FiniteRing::from_tables(std::move(name), q, std::move(add), std::move(mul), encode(z), one);
}

/// Upper triangular 2x2 matrices [[a,b],[0,c]]; index = a + b m + c m^2.
inline RingPtr triangular2(const RingPtr& base, std::string name = {}) {
  const std::size_t m = base->order(), q = m * m * m;
  if (q > FiniteRing::max_order) throw BadInput("triangular2: ring too large");
  std::vector<Elem> add(q * q), mul(q * q);
  auto enc = [m](Elem a, Elem b, Elem c) { return static_cast<Elem>(a + b * m + c * m * m); };
  for (std::size_t x = 0; x < q; ++x) {
    const Elem a = static_cast<Elem>(x % m), b = static_cast<Elem>((x / m) % m), c = static_cast<Elem>(x / (m * m));
    for (std::size_t y = 0; y < q; ++y) {
      const Elem a2 = static_cast<Elem>(y % m), b2 = static_cast<Elem>((y / m) % m), c2 = static_cast<Elem>(y / (m * m));
      add[x * q + y] = enc(base->add(a, a2), base->add(b, b2), base->add(c, c2));
      mul[x * q + y] = enc(base->mul(a, a2), base->add(base->mul(a, b2), base->mul(b, c2)), base->mul(c, c2));
    }
  }
  std::optional<Elem> one;
  if (base->has_one()) one = enc(base->one(), base->zero(), base->one());
  if (name.empty()) name = "T2_" + base->name();
  return FiniteRing::from_tables(std::move(name), q, std::move(add), std::move(mul), enc(base->zero(), base->zero(), base->zero()), one);
}

/// base[eps] with eps^2 = 0; index = a + b m for a + b eps.
inline RingPtr dual_numbers(const RingPtr& base, std::string name = {}) {
  const std::size_t m = base->order(), q = m * m;
  if (q > FiniteRing::max_order) throw BadInput("dual_numbers: ring too large");
  std::vector<Elem> add(q * q), mul(q * q);
  for (std::size_t x = 0; x < q; ++x) {
    const Elem a = static_cast<Elem>(x % m), b = static_cast<Elem>(x / m);
    for (std::size_t y = 0; y < q; ++y) {
      const Elem c = static_cast<Elem>(y % m), d = static_cast<Elem>(y / m);
      add[x * q + y] = static_cast<Elem>(base->add(a, c) + base->add(b, d) * m);
      mul[x * q + y] = static_cast<Elem>(base->mul(a, c) + base->add(base->mul(a, d), base->mul(b, c)) * m);
    }
  }
  std::optional<Elem> one;
  if (base->has_one()) one = base->one();
  if (name.empty()) name = base->name() + "eps";
  return FiniteRing::from_tables(std::move(name), q, std::move(add), std::move(mul), base->zero(), one);
}

/// The abelian group Z/n with the trivial product.
inline RingPtr square_zero(std::size_t n, std::string name = {}) {
  if (n == 0) throw BadInput("square_zero(0) is infinite");
  std::vector<Elem> add(n * n), mul(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) add[a * n + b] = static_cast<Elem>((a + b) % n);
  if (name.empty()) name = "SZ" + std::to_string(n);
  return FiniteRing::from_tables(std::move(name), n, std::move(add), std::move(mul), 0, std::nullopt);
}

/// r1 x r2; index = i + j |r1|.
inline RingPtr direct_product(const RingPtr& r1, const RingPtr& r2, std::string name = {}) {
  const std::size_t m1 = r1->order(), m2 = r2->order(), q = m1 * m2;
  if (q > FiniteRing::max_order) throw BadInput("direct_product: ring too large");
  std::vector<Elem> add(q * q), mul(q * q);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y) {
      const Elem a1 = static_cast<Elem>(x % m1), a2 = static_cast<Elem>(x / m1);
      const Elem b1 = static_cast<Elem>(y % m1), b2 = static_cast<Elem>(y / m1);
      add[x * q + y] = static_cast<Elem>(r1->add(a1, b1) + r2->add(a2, b2) * m1);
      mul[x * q + y] = static_cast<Elem>(r1->mul(a1, b1) + r2->mul(a2, b2) * m1);
    }
  std::optional<Elem> one;
  if (r1->has_one() && r2->has_one()) one = static_cast<Elem>(r1->one() + r2->one() * m1);
  if (name.empty()) name = r1->name() + "x" + r2->name();
  return FiniteRing::from_tables(std::move(name), q, std::move(add), std::move(mul),
                                 static_cast<Elem>(r1->zero() + r2->zero() * m1), one);
}

/// Ring given by explicit tables.
inline RingPtr table(std::string name, std::size_t order, std::vector<Elem> add, std::vector<Elem> mul, Elem zero,
                     std::optional<Elem> one) {
  return FiniteRing::from_tables(std::move(name), order, std::move(add), std::move(mul), zero, one);
}

/// The subring of `b` on the given elements (sorted carrier order), e.g. an ideal.
/// A unit of the subring is recorded when one exists.
inline RingPtr subring(const RingPtr& b, std::vector<Elem> elements, std::string name = {}) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  std::vector<Elem> pos(b->order(), static_cast<Elem>(-1));
  for (std::size_t i = 0; i < elements.size(); ++i) pos[elements[i]] = static_cast<Elem>(i);
  const std::size_t q = elements.size();
  std::vector<Elem> add(q * q), mul(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      const Elem s = pos[b->add(elements[i], elements[j])], p = pos[b->mul(elements[i], elements[j])];
      if (s == static_cast<Elem>(-1) || p == static_cast<Elem>(-1)) throw BadInput("subring: subset not closed");
      add[i * q + j] = s;
      mul[i * q + j] = p;
    }
  if (pos[b->zero()] == static_cast<Elem>(-1)) throw BadInput("subring: subset lacks zero");
  std::optional<Elem> one;
  for (Elem e = 0; e < q && !one; ++e) {
    bool ok = true;
    for (Elem x = 0; x < q && ok; ++x) ok = mul[e * q + x] == x && mul[x * q + e] == x;
    if (ok) one = e;
  }
  if (name.empty()) name = b->name() + "_sub";
  return FiniteRing::from_tables(std::move(name), q, std::move(add), std::move(mul), pos[b->zero()], one);
}

}  // namespace rings

/// Unitalization A + Z/M of a (possibly nonunital) ring, with the ideal
/// embedding and the split augmentation onto Z/M.
struct Unitalization {
  RingPtr ring;             ///< A~ = A + Z/M, index = a + n |A|
  RingPtr scalars;          ///< Z/M
  RingMap embedding;        ///< A -> A~
  RingMap augmentation;     ///< A~ -> Z/M
  RingMap scalar_section;   ///< Z/M -> A~
  std::uint64_t modulus = 0;
};

/// Adjoins a unit over Z/M, M a multiple of the additive exponent of `a`
/// (M = exponent when `modulus` is 0). Product (x+n)(y+k) = xy + n y + k x + nk.
inline Unitalization unitalize_finite(const RingPtr& a, std::uint64_t modulus = 0) {
  const std::uint64_t exponent = a->char_exponent();
  if (modulus == 0) modulus = exponent;
  if (modulus % exponent != 0)
    throw BadInput("unitalization modulus " + std::to_string(modulus) + " is not a multiple of the additive exponent " +
                   std::to_string(exponent));
  const std::size_t m = a->order(), q = m * modulus;
  if (q > FiniteRing::max_order) throw BadInput("unitalization too large");
  std::vector<Elem> add(q * q), mul(q * q);
  for (std::size_t x = 0; x < q; ++x) {
    const Elem xa = static_cast<Elem>(x % m);
    const long long xn = static_cast<long long>(x / m);
    for (std::size_t y = 0; y < q; ++y) {
      const Elem ya = static_cast<Elem>(y % m);
      const long long yn = static_cast<long long>(y / m);
      const Elem sa = a->add(xa, ya);
      const auto sn = static_cast<std::size_t>((xn + yn) % static_cast<long long>(modulus));
      add[x * q + y] = static_cast<Elem>(sa + sn * m);
      const Elem pa = a->add(a->mul(xa, ya), a->add(a->times(xn, ya), a->times(yn, xa)));
      const auto pn = static_cast<std::size_t>((xn * yn) % static_cast<long long>(modulus));
      mul[x * q + y] = static_cast<Elem>(pa + pn * m);
    }
  }
  Unitalization u;
  u.modulus = modulus;
  u.ring = FiniteRing::from_tables(a->name() + "~" + std::to_string(modulus), q, std::move(add), std::move(mul),
                                   a->zero(), static_cast<Elem>(a->zero() + m), true);
  u.scalars = rings::zmod(modulus);
  u.embedding = RingMap{a, u.ring, {}};
  for (Elem x = 0; x < m; ++x) u.embedding.images.push_back(x);
  u.augmentation = RingMap{u.ring, u.scalars, {}};
  for (std::size_t x = 0; x < q; ++x) u.augmentation.images.push_back(static_cast<Elem>(x / m));
  u.scalar_section = RingMap{u.scalars, u.ring, {}};
  for (std::size_t n = 0; n < modulus; ++n) u.scalar_section.images.push_back(static_cast<Elem>(a->zero() + n * m));
  return u;
}

}  // namespace klow
