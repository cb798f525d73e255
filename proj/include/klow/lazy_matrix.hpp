#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "klow/error.hpp"
#include "klow/finite_ring.hpp"
#include "klow/rmatrix.hpp"

namespace klow {

/// 1-based row/column index of an N x N matrix.
using Index = std::uint64_t;
/// Sorted by index, no zero values.
using SparseVec = std::vector<std::pair<Index, Elem>>;

enum class GammaVerdict { gamma, gamma_ell, unknown };

inline std::string to_string(GammaVerdict v) {
  switch (v) {
    case GammaVerdict::gamma: return "gamma";
    case GammaVerdict::gamma_ell: return "gamma_ell";
    default: return "unknown";
  }
}

/// Structural facts composed along the expression tree, never read off a window.
struct GammaCertificate {
  bool rows_finite = false;
  bool cols_finite = false;
  std::optional<Index> row_bound;  ///< uniform bound on nonzeros per row
  std::optional<Index> col_bound;
  std::optional<std::set<Elem>> values;  ///< superset of all entries, 0 included

  GammaVerdict verdict() const {
    if (!rows_finite || !cols_finite) return GammaVerdict::unknown;
    if (row_bound && col_bound && values) return GammaVerdict::gamma;
    return GammaVerdict::gamma_ell;
  }
};

/// An N x N matrix observed through exact entry, row and column queries.
/// Rows and columns have finite support unless built by `custom` without
/// support functions, in which case only entry() is available.
class LazyMatrix {
 public:
  using EntryFn = std::function<Elem(Index, Index)>;
  using VecFn = std::function<SparseVec(Index)>;
  using IndexMap = std::function<Index(Index)>;
  using PartialInverse = std::function<std::optional<Index>(Index)>;

  LazyMatrix() = default;

  static LazyMatrix zero(const RingPtr& r) { return LazyMatrix(make(Kind::zero, r, "0")); }
  static LazyMatrix identity(const RingPtr& r) {
    if (!r->has_one()) throw NotUnital(r->name());
    return LazyMatrix(make(Kind::identity, r, "1"));
  }

  /// Finite support matrix; keys are 1-based (row, col), zero values dropped.
  static LazyMatrix finite(const RingPtr& r, const std::map<std::pair<Index, Index>, Elem>& entries,
                           std::string name = {}) {
    auto n = make(Kind::finite, r, name);
    for (const auto& [pq, v] : entries) {
      if (pq.first == 0 || pq.second == 0) throw BadInput("finite matrix indices start at 1");
      if (v >= r->order()) throw BadInput("finite matrix entry out of range");
      if (v == r->zero()) continue;
      n->rows[pq.first].push_back({pq.second, v});
      n->cols[pq.second].push_back({pq.first, v});
    }
    if (n->name.empty()) {
      n->name = "finite{";
      bool first = true;
      for (const auto& [p, row] : n->rows)
        for (const auto& [q, v] : row) {
          n->name += (first ? "" : ",") + std::to_string(p) + ":" + std::to_string(q) + "=" + std::to_string(v);
          first = false;
        }
      n->name += "}";
    }
    return LazyMatrix(n);
  }

  /// Matrix unit a e_pq.
  static LazyMatrix unit(const RingPtr& r, Index p, Index q, std::optional<Elem> a = std::nullopt) {
    return finite(r, {{{p, q}, a ? *a : r->one()}}, "e" + std::to_string(p) + "_" + std::to_string(q));
  }

  /// sum_i e_{i, f(i)} for an injective f; `finv` is its partial inverse.
  static LazyMatrix injection(const RingPtr& r, std::string name, IndexMap f, PartialInverse finv) {
    if (!r->has_one()) throw NotUnital(r->name());
    auto n = make(Kind::injection, r, std::move(name));
    n->f = std::move(f);
    n->finv = std::move(finv);
    return LazyMatrix(n);
  }

  static LazyMatrix alpha0(const RingPtr& r) {
    return injection(r, "alpha_0", [](Index i) { return 2 * i; },
                     [](Index q) -> std::optional<Index> { return q % 2 == 0 ? std::optional<Index>(q / 2) : std::nullopt; });
  }
  static LazyMatrix alpha1(const RingPtr& r) {
    return injection(r, "alpha_1", [](Index i) { return 2 * i - 1; },
                     [](Index q) -> std::optional<Index> { return q % 2 == 1 ? std::optional<Index>((q + 1) / 2) : std::nullopt; });
  }
  static LazyMatrix beta0(const RingPtr& r) { return transpose(alpha0(r)).renamed("beta_0"); }
  static LazyMatrix beta1(const RingPtr& r) { return transpose(alpha1(r)).renamed("beta_1"); }
  /// Toeplitz shift sum_i e_{i,i+1} and its transpose.
  static LazyMatrix shift(const RingPtr& r) {
    return injection(r, "alpha", [](Index i) { return i + 1; },
                     [](Index q) -> std::optional<Index> { return q >= 2 ? std::optional<Index>(q - 1) : std::nullopt; });
  }
  static LazyMatrix shift_star(const RingPtr& r) { return transpose(shift(r)).renamed("alpha*"); }

  /// Arbitrary matrix given by callbacks. Without row/col functions the
  /// result supports entry() only and certifies nothing.
  static LazyMatrix custom(const RingPtr& r, std::string name, EntryFn entry, VecFn row = {}, VecFn col = {},
                           GammaCertificate cert = {}) {
    auto n = make(Kind::custom, r, std::move(name));
    n->entry_fn = std::move(entry);
    n->row_fn = std::move(row);
    n->col_fn = std::move(col);
    if (!n->row_fn) cert.rows_finite = false;
    if (!n->col_fn) cert.cols_finite = false;
    n->custom_cert = std::move(cert);
    return LazyMatrix(n);
  }

  friend LazyMatrix operator+(const LazyMatrix& a, const LazyMatrix& b) {
    check_same(a, b);
    auto n = make(Kind::sum, a.ring(), "(" + a.describe() + " + " + b.describe() + ")");
    n->a = a.node_;
    n->b = b.node_;
    return LazyMatrix(n);
  }
  friend LazyMatrix operator*(const LazyMatrix& a, const LazyMatrix& b) {
    check_same(a, b);
    auto n = make(Kind::product, a.ring(), a.describe() + " " + b.describe());
    n->a = a.node_;
    n->b = b.node_;
    return LazyMatrix(n);
  }
  friend LazyMatrix scale(Elem c, const LazyMatrix& a) {
    if (c >= a.ring()->order()) throw BadInput("scalar out of range");
    auto n = make(Kind::scale, a.ring(), std::to_string(c) + "*" + a.describe());
    n->a = a.node_;
    n->scalar = c;
    return LazyMatrix(n);
  }
  friend LazyMatrix operator-(const LazyMatrix& a) { return scale(a.ring()->neg(a.ring()->one()), a).renamed("-" + a.describe()); }
  friend LazyMatrix operator-(const LazyMatrix& a, const LazyMatrix& b) {
    return (a + (-b)).renamed("(" + a.describe() + " - " + b.describe() + ")");
  }
  friend LazyMatrix transpose(const LazyMatrix& a) {
    auto n = make(Kind::transpose, a.ring(), a.describe() + "^t");
    n->a = a.node_;
    return LazyMatrix(n);
  }
  friend LazyMatrix power(const LazyMatrix& a, std::size_t k) {
    if (k == 0) return identity(a.ring());
    LazyMatrix out = a;
    for (std::size_t i = 1; i < k; ++i) out = out * a;
    return out.renamed(a.describe() + "^" + std::to_string(k));
  }

  const RingPtr& ring() const { return node_->ring; }
  const std::string& describe() const { return node_->name; }
  bool has_supports() const { return supports(*node_); }

  LazyMatrix renamed(std::string name) const {
    auto n = std::make_shared<Node>(*node_);
    n->name = std::move(name);
    n->cache = std::make_shared<Cache>();
    return LazyMatrix(n);
  }

  SparseVec row(Index p) const { return row_of(*node_, p); }
  SparseVec col(Index q) const { return col_of(*node_, q); }

  Elem entry(Index p, Index q) const {
    if (p == 0 || q == 0) throw BadInput("indices start at 1");
    if (!supports(*node_)) return entry_direct(*node_, p, q);
    for (const auto& [c, v] : row(p))
      if (c == q) return v;
    return ring()->zero();
  }

  /// Entry computed through the column path; agrees with entry() when the
  /// supports are sound.
  Elem entry_via_col(Index p, Index q) const {
    for (const auto& [r, v] : col(q))
      if (r == p) return v;
    return ring()->zero();
  }

  GammaCertificate certificate() const { return cert_of(*node_); }
  GammaVerdict gamma_membership() const { return certificate().verdict(); }

  /// Entries when the support is certified finite; empty optional otherwise.
  std::optional<std::map<std::pair<Index, Index>, Elem>> finite_entries() const {
    auto rows = finite_rows(*node_);
    if (!rows) return std::nullopt;
    std::map<std::pair<Index, Index>, Elem> out;
    for (Index p : *rows)
      for (const auto& [q, v] : row(p)) out[{p, q}] = v;
    return out;
  }

 private:
  enum class Kind { zero, identity, finite, injection, custom, sum, product, scale, transpose, phi_infinity };

  struct Cache {
    std::mutex mu;
    std::unordered_map<Index, SparseVec> rows, cols;
  };

  struct Node {
    Kind kind;
    RingPtr ring;
    std::string name;
    std::shared_ptr<const Node> a, b;
    Elem scalar = 0;
    std::map<Index, SparseVec> rows, cols;  // finite, and phi_infinity's argument
    IndexMap f;
    PartialInverse finv;
    EntryFn entry_fn;
    VecFn row_fn, col_fn;
    GammaCertificate custom_cert;
    std::shared_ptr<Cache> cache = std::make_shared<Cache>();
  };

  explicit LazyMatrix(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<Node> make(Kind k, const RingPtr& r, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->ring = r;
    n->name = std::move(name);
    return n;
  }

  static void check_same(const LazyMatrix& a, const LazyMatrix& b) {
    if (!a.node_ || !b.node_) throw BadInput("empty lazy matrix");
    if (a.ring() != b.ring() && a.ring()->digest() != b.ring()->digest())
      throw RingMismatch("lazy matrices over '" + a.ring()->name() + "' and '" + b.ring()->name() + "'");
  }

  static bool supports(const Node& n) {
    switch (n.kind) {
      case Kind::custom: return n.row_fn && n.col_fn;
      case Kind::sum:
      case Kind::product: return supports(*n.a) && supports(*n.b);
      case Kind::scale:
      case Kind::transpose: return supports(*n.a);
      default: return true;
    }
  }

  static Elem entry_direct(const Node& n, Index p, Index q) {
    if (n.kind == Kind::custom) return n.entry_fn(p, q);
    if (n.kind == Kind::sum) return n.ring->add(entry_direct(*n.a, p, q), entry_direct(*n.b, p, q));
    if (n.kind == Kind::scale) return n.ring->mul(n.scalar, entry_direct(*n.a, p, q));
    if (n.kind == Kind::transpose) return entry_direct(*n.a, q, p);
    throw NotFiniteSupport("entry of '" + n.name + "' needs row supports");
  }

  static SparseVec normalize(const FiniteRing& r, std::map<Index, Elem>& acc) {
    SparseVec out;
    for (const auto& [i, v] : acc)
      if (v != r.zero()) out.push_back({i, v});
    return out;
  }

  static SparseVec merge(const FiniteRing& r, const SparseVec& x, const SparseVec& y) {
    std::map<Index, Elem> acc;
    for (const auto& [i, v] : x) acc[i] = v;
    for (const auto& [i, v] : y) {
      auto it = acc.find(i);
      acc[i] = it == acc.end() ? v : r.add(it->second, v);
    }
    return normalize(r, acc);
  }

  // phi^infinity places a_ij at (g_k(i), g_k(j)), g_k(i) = 2^k (2i - 1) + 1
  static std::optional<std::pair<unsigned, Index>> phi_decode(Index r) {
    if (r < 2) return std::nullopt;
    const Index m = r - 1;
    const unsigned k = static_cast<unsigned>(__builtin_ctzll(m));
    return std::make_pair(k, ((m >> k) + 1) / 2);
  }
  static Index phi_encode(unsigned k, Index i) {
    if (k >= 62 || (2 * i - 1) > (Index{1} << (62 - k))) throw BudgetExceeded("phi_infinity index overflow", static_cast<double>(k));
    return (Index{1} << k) * (2 * i - 1) + 1;
  }

  static SparseVec cached(const Node& n, Index p, bool is_row, const std::function<SparseVec()>& compute) {
    {
      std::lock_guard<std::mutex> lock(n.cache->mu);
      auto& m = is_row ? n.cache->rows : n.cache->cols;
      auto it = m.find(p);
      if (it != m.end()) return it->second;
    }
    SparseVec v = compute();
    std::lock_guard<std::mutex> lock(n.cache->mu);
    (is_row ? n.cache->rows : n.cache->cols).emplace(p, v);
    return v;
  }

  // the column path mirrors the row path on the transpose
  static SparseVec line(const Node& n, Index p, bool is_row) {
    if (p == 0) throw BadInput("indices start at 1");
    const FiniteRing& r = *n.ring;
    switch (n.kind) {
      case Kind::zero: return {};
      case Kind::identity: return {{p, r.one()}};
      case Kind::finite: {
        const auto& m = is_row ? n.rows : n.cols;
        auto it = m.find(p);
        if (it == m.end()) return {};
        SparseVec v = it->second;
        std::sort(v.begin(), v.end());
        return v;
      }
      case Kind::injection: {
        if (is_row) return {{n.f(p), r.one()}};
        auto i = n.finv(p);
        if (!i) return {};
        return {{*i, r.one()}};
      }
      case Kind::custom: {
        const auto& fn = is_row ? n.row_fn : n.col_fn;
        if (!fn) throw NotFiniteSupport("'" + n.name + "' has no certified supports");
        SparseVec v = fn(p);
        std::sort(v.begin(), v.end());
        SparseVec out;
        for (const auto& e : v)
          if (e.second != r.zero()) out.push_back(e);
        return out;
      }
      case Kind::sum: return merge(r, line(*n.a, p, is_row), line(*n.b, p, is_row));
      case Kind::scale: {
        std::map<Index, Elem> acc;
        for (const auto& [i, v] : line(*n.a, p, is_row)) acc[i] = r.mul(n.scalar, v);
        return normalize(r, acc);
      }
      case Kind::transpose: return line(*n.a, p, !is_row);
      case Kind::product:
        return cached(n, p, is_row, [&] {
          const Node& first = is_row ? *n.a : *n.b;
          const Node& second = is_row ? *n.b : *n.a;
          std::map<Index, Elem> acc;
          for (const auto& [k, x] : line(first, p, is_row))
            for (const auto& [j, y] : line(second, k, is_row)) {
              const Elem t = is_row ? r.mul(x, y) : r.mul(y, x);
              auto it = acc.find(j);
              acc[j] = it == acc.end() ? t : r.add(it->second, t);
            }
          return normalize(r, acc);
        });
      case Kind::phi_infinity: {
        auto d = phi_decode(p);
        if (!d) return {};
        const auto& m = is_row ? n.rows : n.cols;
        auto it = m.find(d->second);
        if (it == m.end()) return {};
        SparseVec out;
        for (const auto& [j, v] : it->second) out.push_back({phi_encode(d->first, j), v});
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    return {};
  }

  static SparseVec row_of(const Node& n, Index p) { return line(n, p, true); }
  static SparseVec col_of(const Node& n, Index q) { return line(n, q, false); }

  static std::optional<std::set<Index>> finite_rows(const Node& n) {
    switch (n.kind) {
      case Kind::zero: return std::set<Index>{};
      case Kind::finite: {
        std::set<Index> s;
        for (const auto& [p, v] : n.rows) s.insert(p);
        return s;
      }
      case Kind::sum: {
        auto x = finite_rows(*n.a), y = finite_rows(*n.b);
        if (!x || !y) return std::nullopt;
        x->insert(y->begin(), y->end());
        return x;
      }
      case Kind::scale: return finite_rows(*n.a);
      case Kind::transpose: {
        // rows of the transpose are the columns of the child
        auto rows = finite_rows(*n.a);
        if (!rows) return std::nullopt;
        std::set<Index> cols;
        for (Index p : *rows)
          for (const auto& [q, v] : row_of(*n.a, p)) cols.insert(q);
        return cols;
      }
      case Kind::product: {
        if (!supports(n)) return std::nullopt;
        if (auto x = finite_rows(*n.a)) return x;
        // finite right factor: rows reached through its rows' columns in the left factor
        auto y = finite_rows(*n.b);
        if (!y) return std::nullopt;
        std::set<Index> s;
        for (Index k : *y)
          for (const auto& [p, v] : col_of(*n.a, k)) s.insert(p);
        return s;
      }
      default: return std::nullopt;
    }
  }

  static std::set<Elem> product_values(const FiniteRing& r, const std::set<Elem>& x, const std::set<Elem>& y, Index terms) {
    std::set<Elem> prods;
    for (Elem a : x)
      for (Elem b : y) prods.insert(r.mul(a, b));
    std::set<Elem> acc{r.zero()};
    for (Index t = 0; t < terms; ++t) {
      std::set<Elem> next = acc;
      for (Elem s : acc)
        for (Elem p : prods) next.insert(r.add(s, p));
      if (next == acc) break;
      acc = std::move(next);
    }
    return acc;
  }

  static GammaCertificate cert_of(const Node& n) {
    const FiniteRing& r = *n.ring;
    GammaCertificate c;
    switch (n.kind) {
      case Kind::zero:
        return {true, true, 0, 0, std::set<Elem>{r.zero()}};
      case Kind::identity:
      case Kind::injection:
        return {true, true, 1, 1, std::set<Elem>{r.zero(), r.one()}};
      case Kind::finite:
      case Kind::phi_infinity: {
        // phi^infinity copies each row/column of its argument injectively
        Index rb = 0, cb = 0;
        std::set<Elem> vals{r.zero()};
        for (const auto& [p, row] : n.rows) {
          rb = std::max<Index>(rb, row.size());
          for (const auto& e : row) vals.insert(e.second);
        }
        for (const auto& [q, col] : n.cols) cb = std::max<Index>(cb, col.size());
        return {true, true, rb, cb, vals};
      }
      case Kind::custom: return n.custom_cert;
      case Kind::transpose: {
        c = cert_of(*n.a);
        std::swap(c.rows_finite, c.cols_finite);
        std::swap(c.row_bound, c.col_bound);
        return c;
      }
      case Kind::scale: {
        c = cert_of(*n.a);
        if (c.values) {
          std::set<Elem> v;
          for (Elem x : *c.values) v.insert(r.mul(n.scalar, x));
          v.insert(r.zero());
          c.values = v;
        }
        return c;
      }
      case Kind::sum: {
        auto x = cert_of(*n.a), y = cert_of(*n.b);
        c.rows_finite = x.rows_finite && y.rows_finite;
        c.cols_finite = x.cols_finite && y.cols_finite;
        if (x.row_bound && y.row_bound) c.row_bound = *x.row_bound + *y.row_bound;
        if (x.col_bound && y.col_bound) c.col_bound = *x.col_bound + *y.col_bound;
        if (x.values && y.values) {
          std::set<Elem> v;
          for (Elem a : *x.values)
            for (Elem b : *y.values) v.insert(r.add(a, b));
          c.values = v;
        }
        return c;
      }
      case Kind::product: {
        auto x = cert_of(*n.a), y = cert_of(*n.b);
        c.rows_finite = x.rows_finite && y.rows_finite;
        c.cols_finite = x.cols_finite && y.cols_finite;
        if (x.row_bound && y.row_bound) c.row_bound = *x.row_bound * *y.row_bound;
        if (x.col_bound && y.col_bound) c.col_bound = *x.col_bound * *y.col_bound;
        if (x.values && y.values && x.row_bound && y.col_bound)
          c.values = product_values(r, *x.values, *y.values, std::min(*x.row_bound, *y.col_bound));
        return c;
      }
    }
    return c;
  }

  friend LazyMatrix phi_infinity(const LazyMatrix& a);

  std::shared_ptr<const Node> node_;
};

/// sum_k beta_1^k beta_0 a alpha_0 alpha_1^k for a of finite support,
/// evaluated from the index family g_k(i) = 2^k (2i - 1) + 1.
inline LazyMatrix phi_infinity(const LazyMatrix& a) {
  auto entries = a.finite_entries();
  if (!entries) throw NotFiniteSupport("phi_infinity needs a finite-support argument, got " + a.describe());
  auto n = LazyMatrix::make(LazyMatrix::Kind::phi_infinity, a.ring(), "phi_inf(" + a.describe() + ")");
  for (const auto& [pq, v] : *entries) {
    n->rows[pq.first].push_back({pq.second, v});
    n->cols[pq.second].push_back({pq.first, v});
  }
  return LazyMatrix(n);
}

/// Exact top-left N x N corner; RMatrix index (p-1, q-1) holds entry (p, q).
inline RMatrix window_eval(const LazyMatrix& m, std::size_t n) {
  RMatrix out(m.ring(), n);
  if (!m.has_supports()) {
    for (Index p = 1; p <= n; ++p)
      for (Index q = 1; q <= n; ++q) out(p - 1, q - 1) = m.entry(p, q);
    return out;
  }
  for (Index p = 1; p <= n; ++p)
    for (const auto& [q, v] : m.row(p))
      if (q <= n) out(p - 1, q - 1) = v;
  return out;
}

/// First index pair in the N-window where the two matrices differ.
inline std::optional<std::string> window_difference(const LazyMatrix& a, const LazyMatrix& b, std::size_t n) {
  const RMatrix x = window_eval(a, n), y = window_eval(b, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (x(p, q) != y(p, q))
        return "(" + std::to_string(p + 1) + "," + std::to_string(q + 1) + "): " + std::to_string(x(p, q)) +
               " != " + std::to_string(y(p, q));
  return std::nullopt;
}

/// Largest M <= N such that the product of the N-windows of x and y equals
/// the window of x*y on the top-left M x M block: every intermediate index
/// used by rows <= M of x and columns <= M of y stays within N.
inline std::size_t certified_product_window(const LazyMatrix& x, const LazyMatrix& y, std::size_t n) {
  std::size_t m = 0;
  while (m < n) {
    const Index next = m + 1;
    bool ok = true;
    for (const auto& [k, v] : x.row(next)) ok = ok && k <= n;
    for (const auto& [k, v] : y.col(next)) ok = ok && k <= n;
    if (!ok) break;
    m = next;
  }
  return m;
}

/// Randomized soundness probe of the row/column supports: every entry found
/// on a row must be found on its column and conversely, and a random cell
/// must agree along both paths. Returns the first mismatch.
inline std::optional<std::string> probe_supports(const LazyMatrix& m, std::size_t probes, Index max_index,
                                                 std::mt19937& rng) {
  std::uniform_int_distribution<Index> d(1, max_index);
  auto where = [&](Index p, Index q, Elem a, Elem b) {
    return m.describe() + " at (" + std::to_string(p) + "," + std::to_string(q) + "): row path " + std::to_string(a) +
           ", column path " + std::to_string(b);
  };
  for (std::size_t t = 0; t < probes; ++t) {
    const Index p = d(rng), q = d(rng);
    for (const auto& [c, v] : m.row(p))
      if (m.entry_via_col(p, c) != v) return where(p, c, v, m.entry_via_col(p, c));
    for (const auto& [r, v] : m.col(q))
      if (m.entry(r, q) != v) return where(r, q, m.entry(r, q), v);
    if (m.entry(p, q) != m.entry_via_col(p, q)) return where(p, q, m.entry(p, q), m.entry_via_col(p, q));
  }
  return std::nullopt;
}

/// Decomposition N = N'_0 + N'_1 with bijections psi_i : N -> N'_i.
struct SumDecomposition {
  std::string name;
  LazyMatrix::IndexMap psi0, psi1;
  LazyMatrix::PartialInverse inv0, inv1;

  /// sum_n e_{n, psi_i(n)}: the alpha_i of this decomposition.
  LazyMatrix alpha(const RingPtr& r, int i) const {
    return LazyMatrix::injection(r, name + ".alpha_" + std::to_string(i), i == 0 ? psi0 : psi1, i == 0 ? inv0 : inv1);
  }
  LazyMatrix beta(const RingPtr& r, int i) const {
    return transpose(alpha(r, i)).renamed(name + ".beta_" + std::to_string(i));
  }
  /// The bijection N -> N sending psi_i(n) to other.psi_i(n).
  Index to(const SumDecomposition& other, Index m) const {
    if (auto n = inv0(m)) return other.psi0(*n);
    if (auto n = inv1(m)) return other.psi1(*n);
    throw BadInput("decomposition '" + name + "' does not cover " + std::to_string(m));
  }
};

/// Evens via 2n and odds via 2n - 1.
inline SumDecomposition even_odd_decomposition() {
  return {"even_odd",
          [](Index n) { return 2 * n; },
          [](Index n) { return 2 * n - 1; },
          [](Index m) -> std::optional<Index> { return m % 2 == 0 ? std::optional<Index>(m / 2) : std::nullopt; },
          [](Index m) -> std::optional<Index> { return m % 2 == 1 ? std::optional<Index>((m + 1) / 2) : std::nullopt; }};
}

/// Multiples of 3 via 3n, the rest in increasing order.
inline SumDecomposition mod3_decomposition() {
  return {"mod3",
          [](Index n) { return 3 * n; },
          [](Index n) { return n + (n - 1) / 2; },
          [](Index m) -> std::optional<Index> { return m % 3 == 0 ? std::optional<Index>(m / 3) : std::nullopt; },
          [](Index m) -> std::optional<Index> {
            if (m % 3 == 0) return std::nullopt;
            return 2 * (m / 3) + m % 3;
          }};
}

/// a [+] b = beta_0 a alpha_0 + beta_1 b alpha_1.
inline LazyMatrix box_plus(const LazyMatrix& a, const LazyMatrix& b,
                           const SumDecomposition& d = even_odd_decomposition()) {
  const RingPtr& r = a.ring();
  return (d.beta(r, 0) * a * d.alpha(r, 0) + d.beta(r, 1) * b * d.alpha(r, 1))
      .renamed("(" + a.describe() + " [+] " + b.describe() + ")");
}

/// The permutation matrix sum_m e_{sigma(m), m} of the bijection taking
/// decomposition `from` onto `to`.
inline LazyMatrix decomposition_permutation(const RingPtr& r, const SumDecomposition& from, const SumDecomposition& to) {
  return transpose(LazyMatrix::injection(
      r, "sigma(" + from.name + "->" + to.name + ")", [from, to](Index m) { return from.to(to, m); },
      [from, to](Index m) -> std::optional<Index> { return to.to(from, m); }));
}

}  // namespace klow
