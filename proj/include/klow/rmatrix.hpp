#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "klow/error.hpp"
#include "klow/finite_ring.hpp"

namespace klow {

/// Square matrix over a FiniteRing, row-major, 0-based.
struct RMatrix {
  RingPtr ring;
  std::size_t n = 0;
  std::vector<Elem> entries;

  RMatrix() = default;
  RMatrix(RingPtr r, std::size_t dim) : ring(std::move(r)), n(dim), entries(dim * dim, ring->zero()) {}
  RMatrix(RingPtr r, std::size_t dim, std::vector<Elem> e) : ring(std::move(r)), n(dim), entries(std::move(e)) {
    if (entries.size() != n * n) throw BadInput("matrix entry count does not match dimension");
    for (Elem x : entries)
      if (x >= ring->order()) throw BadInput("matrix entry out of range for ring '" + ring->name() + "'");
  }

  static RMatrix zero(const RingPtr& r, std::size_t dim) { return RMatrix(r, dim); }
  static RMatrix identity(const RingPtr& r, std::size_t dim) {
    RMatrix m(r, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = r->one();
    return m;
  }
  /// 1 + a e_ij.
  static RMatrix elementary(const RingPtr& r, std::size_t dim, std::size_t i, std::size_t j, Elem a) {
    RMatrix m = identity(r, dim);
    m(i, j) = r->add(m(i, j), a);
    return m;
  }
  /// diag(1_k, 0_{dim-k}).
  static RMatrix projector(const RingPtr& r, std::size_t dim, std::size_t k) {
    RMatrix m(r, dim);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = r->one();
    return m;
  }

  Elem& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

  bool operator==(const RMatrix& o) const { return n == o.n && entries == o.entries; }
  bool operator!=(const RMatrix& o) const { return !(*this == o); }
  /// Global order: by dimension, then row-major entries.
  bool operator<(const RMatrix& o) const { return n != o.n ? n < o.n : entries < o.entries; }

  bool is_zero() const {
    for (Elem x : entries)
      if (x != ring->zero()) return false;
    return true;
  }
  bool is_identity() const { return *this == identity(ring, n); }

  /// Identity or identity plus one off-diagonal entry.
  bool is_elementary() const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Elem x = (*this)(i, j);
        if (i == j) {
          if (x != ring->one()) return false;
        } else if (x != ring->zero()) {
          ++off;
        }
      }
    return off <= 1;
  }

  bool is_idempotent() const;

  std::vector<std::vector<Elem>> rows() const {
    std::vector<std::vector<Elem>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i].assign(entries.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                      entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    return out;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < n; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < n; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }
};

inline void require_same_ring(const RMatrix& a, const RMatrix& b) {
  if (a.ring != b.ring && a.ring->digest() != b.ring->digest())
    throw RingMismatch("matrices over different rings: '" + a.ring->name() + "' and '" + b.ring->name() + "'");
  if (a.n != b.n) throw RingMismatch("matrix dimensions differ: " + std::to_string(a.n) + " and " + std::to_string(b.n));
}

inline RMatrix operator+(const RMatrix& a, const RMatrix& b) {
  require_same_ring(a, b);
  RMatrix c(a.ring, a.n);
  for (std::size_t t = 0; t < a.entries.size(); ++t) c.entries[t] = a.ring->add(a.entries[t], b.entries[t]);
  return c;
}

inline RMatrix operator-(const RMatrix& a) {
  RMatrix c(a.ring, a.n);
  for (std::size_t t = 0; t < a.entries.size(); ++t) c.entries[t] = a.ring->neg(a.entries[t]);
  return c;
}

inline RMatrix operator-(const RMatrix& a, const RMatrix& b) { return a + (-b); }

inline RMatrix operator*(const RMatrix& a, const RMatrix& b) {
  require_same_ring(a, b);
  const auto& r = *a.ring;
  const std::size_t n = a.n;
  RMatrix c(a.ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Elem x = a.entries[i * n + k];
      if (x == r.zero()) continue;
      for (std::size_t j = 0; j < n; ++j) c.entries[i * n + j] = r.add(c.entries[i * n + j], r.mul(x, b.entries[k * n + j]));
    }
  return c;
}

/// Scalar multiple a*m (left).
inline RMatrix scale(Elem a, const RMatrix& m) {
  RMatrix c(m.ring, m.n);
  for (std::size_t t = 0; t < m.entries.size(); ++t) c.entries[t] = m.ring->mul(a, m.entries[t]);
  return c;
}

inline bool RMatrix::is_idempotent() const { return (*this) * (*this) == *this; }

/// Entrywise image under a ring map.
inline RMatrix map_matrix(const RingMap& f, const RMatrix& m) {
  RMatrix c(f.target, m.n);
  for (std::size_t t = 0; t < m.entries.size(); ++t) c.entries[t] = f(m.entries[t]);
  return c;
}

/// Block diagonal diag(a, b).
inline RMatrix block_diag(const RMatrix& a, const RMatrix& b) {
  if (a.ring != b.ring && a.ring->digest() != b.ring->digest()) throw RingMismatch("block_diag over different rings");
  RMatrix c(a.ring, a.n + b.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.n; ++i)
    for (std::size_t j = 0; j < b.n; ++j) c(a.n + i, a.n + j) = b(i, j);
  return c;
}

/// Pads with zero rows/columns to dimension `dim`.
inline RMatrix pad(const RMatrix& a, std::size_t dim) {
  if (dim < a.n) throw BadInput("pad: target dimension smaller than matrix");
  RMatrix c(a.ring, dim);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) c(i, j) = a(i, j);
  return c;
}

/// 2x2 block matrix [[a, b], [c, d]] of equal-size blocks.
inline RMatrix blocks(const RMatrix& a, const RMatrix& b, const RMatrix& c, const RMatrix& d) {
  const std::size_t n = a.n;
  RMatrix m(a.ring, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      m(i, n + j) = b(i, j);
      m(n + i, j) = c(i, j);
      m(n + i, n + j) = d(i, j);
    }
  return m;
}

/// Permutation matrix sending basis vector e_j to e_{perm[j]}.
inline RMatrix permutation_matrix(const RingPtr& r, const std::vector<std::size_t>& perm) {
  RMatrix m(r, perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) m(perm[j], j) = r->one();
  return m;
}

/// Inverse by action-bijectivity on column vectors R^n; empty if g is not
/// invertible. Cost |R|^n per call.
inline std::optional<RMatrix> inverse(const RMatrix& g) {
  const auto& r = *g.ring;
  const std::size_t n = g.n, m = r.order();
  if (!r.has_one()) throw NotUnital(r.name());
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > (std::size_t{1} << 34) / m) throw BudgetExceeded("invertibility test: |R|^n too large", static_cast<double>(total) * m);
    total *= m;
  }
  // image of every vector; injectivity <=> bijectivity on a finite set
  std::vector<std::uint32_t> preimage(total, static_cast<std::uint32_t>(-1));
  std::vector<Elem> v(n, r.zero()), w(n);
  std::vector<Elem> digits(n, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (std::size_t i = n; i-- > 0;) {
      v[i] = static_cast<Elem>(x % m);
      x /= m;
    }
    std::size_t img = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Elem acc = r.zero();
      for (std::size_t k = 0; k < n; ++k) acc = r.add(acc, r.mul(g.entries[i * n + k], v[k]));
      img = img * m + acc;
    }
    if (preimage[img] != static_cast<std::uint32_t>(-1)) return std::nullopt;
    preimage[img] = static_cast<std::uint32_t>(code);
  }
  RMatrix h(g.ring, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t ej = 0;
    for (std::size_t i = 0; i < n; ++i) ej = ej * m + (i == j ? r.one() : r.zero());
    std::size_t x = preimage[ej];
    for (std::size_t i = n; i-- > 0;) {
      h(i, j) = static_cast<Elem>(x % m);
      x /= m;
    }
  }
  return h;
}

inline bool is_invertible(const RMatrix& g) { return inverse(g).has_value(); }

inline RMatrix inverse_or_throw(const RMatrix& g) {
  auto h = inverse(g);
  if (!h) throw NotInvertible("matrix " + g.str() + " is not invertible over " + g.ring->name());
  return *h;
}

/// Packs an n x n matrix into a 64-bit key: big-endian mixed radix over the
/// row-major entries, so numeric order on keys is lexicographic order.
class MatrixCodec {
 public:
  MatrixCodec(RingPtr r, std::size_t n) : ring_(std::move(r)), n_(n) {
    long double space = 1;
    for (std::size_t t = 0; t < n * n; ++t) space *= static_cast<long double>(ring_->order());
    if (space > 1.8e19L) throw BudgetExceeded("matrix key space exceeds 64 bits", static_cast<double>(space));
    space_ = 1;
    for (std::size_t t = 0; t < n * n; ++t) space_ *= ring_->order();
  }

  const RingPtr& ring() const noexcept { return ring_; }
  std::size_t dim() const noexcept { return n_; }
  /// Number of distinct keys, |R|^{n^2}.
  std::uint64_t key_space() const noexcept { return space_; }

  std::uint64_t encode(const RMatrix& a) const {
    std::uint64_t k = 0;
    for (Elem x : a.entries) k = k * ring_->order() + x;
    return k;
  }
  std::uint64_t encode(const Elem* e) const {
    std::uint64_t k = 0;
    for (std::size_t t = 0; t < n_ * n_; ++t) k = k * ring_->order() + e[t];
    return k;
  }
  RMatrix decode(std::uint64_t k) const {
    RMatrix a(ring_, n_);
    decode_into(k, a.entries.data());
    return a;
  }
  void decode_into(std::uint64_t k, Elem* e) const {
    const std::uint64_t m = ring_->order();
    for (std::size_t t = n_ * n_; t-- > 0;) {
      e[t] = static_cast<Elem>(k % m);
      k /= m;
    }
  }

 private:
  RingPtr ring_;
  std::size_t n_;
  std::uint64_t space_ = 1;
};

/// Set of matrix keys: a bitset when the key space is small, a hash set otherwise.
class KeySet {
 public:
  static constexpr std::uint64_t bitset_limit = std::uint64_t{1} << 31;

  explicit KeySet(std::uint64_t key_space) {
    if (key_space <= bitset_limit) bits_.assign((key_space + 63) / 64, 0);
    else use_hash_ = true;
  }

  /// Inserts; returns true if the key was new.
  bool insert(std::uint64_t k) {
    if (use_hash_) return hash_.insert(k).second;
    std::uint64_t& w = bits_[k >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    if (w & bit) return false;
    w |= bit;
    return true;
  }
  bool contains(std::uint64_t k) const {
    if (use_hash_) return hash_.count(k) != 0;
    return (bits_[k >> 6] >> (k & 63)) & 1u;
  }

 private:
  bool use_hash_ = false;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> hash_;
};

}  // namespace klow
