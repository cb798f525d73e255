#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klow/abelian_group.hpp"
#include "klow/error.hpp"
#include "klow/matrix_group.hpp"

namespace klow {

using Rational = mpq_class;

/// Sparse rational vector, sorted by index, no stored zeros.
using QVec = std::vector<std::pair<std::size_t, Rational>>;

/// Finite-dimensional Q-algebra given by structure constants
/// e_i e_j = sum_k c(i,j,k) e_k.
struct RationalAlgebra {
  std::string name;
  std::size_t dim = 0;
  std::vector<Rational> constants;  ///< flattened, index (i*d + j)*d + k
  std::optional<std::vector<Rational>> unit;

  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const { return constants[(i * dim + j) * dim + k]; }
  Rational& c(std::size_t i, std::size_t j, std::size_t k) { return constants[(i * dim + j) * dim + k]; }

  /// e_i e_j as a sparse vector.
  QVec product(std::size_t i, std::size_t j) const {
    QVec out;
    for (std::size_t k = 0; k < dim; ++k)
      if (c(i, j, k) != 0) out.emplace_back(k, c(i, j, k));
    return out;
  }

  std::vector<Rational> multiply(const std::vector<Rational>& x, const std::vector<Rational>& y) const {
    std::vector<Rational> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (y[j] == 0) continue;
        for (std::size_t k = 0; k < dim; ++k) out[k] += x[i] * y[j] * c(i, j, k);
      }
    }
    return out;
  }

  bool commutative() const {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j)
        for (std::size_t k = 0; k < dim; ++k)
          if (c(i, j, k) != c(j, i, k)) return false;
    return true;
  }

  static RationalAlgebra zero_product(std::string name, std::size_t d) {
    RationalAlgebra a;
    a.name = std::move(name);
    a.dim = d;
    a.constants.assign(d * d * d, Rational(0));
    return a;
  }
};

inline std::vector<Rational> basis_vector(std::size_t d, std::size_t i) {
  std::vector<Rational> v(d);
  v[i] = 1;
  return v;
}

/// Exact associativity and unit checks; throws BadInput with the failing
/// triple.
inline void validate_algebra(const RationalAlgebra& a) {
  const std::size_t d = a.dim;
  if (d == 0) throw BadInput("algebra '" + a.name + "' has dimension 0");
  if (a.constants.size() != d * d * d)
    throw BadInput("algebra '" + a.name + "' needs " + std::to_string(d * d * d) + " structure constants, got " +
                   std::to_string(a.constants.size()));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const auto ei = basis_vector(d, i), ej = basis_vector(d, j), ek = basis_vector(d, k);
        if (a.multiply(a.multiply(ei, ej), ek) != a.multiply(ei, a.multiply(ej, ek)))
          throw BadInput("algebra '" + a.name + "' is not associative at (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + std::to_string(k) + ")",
                         "AxiomViolation");
      }
  if (a.unit) {
    if (a.unit->size() != d) throw BadInput("unit vector of '" + a.name + "' has the wrong length");
    for (std::size_t j = 0; j < d; ++j) {
      const auto ej = basis_vector(d, j);
      if (a.multiply(*a.unit, ej) != ej || a.multiply(ej, *a.unit) != ej)
        throw BadInput("declared unit of '" + a.name + "' fails on e" + std::to_string(j), "AxiomViolation");
    }
  }
}

namespace detail {

using ZVec = std::vector<std::pair<std::size_t, BigInt>>;

inline void make_primitive(ZVec& v) {
  BigInt g = 0;
  for (const auto& [i, x] : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& [i, x] : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline ZVec integral_primitive(const QVec& v) {
  BigInt l = 1;
  for (const auto& [i, x] : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  ZVec out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) out.emplace_back(i, BigInt(x.get_num() * (l / x.get_den())));
  make_primitive(out);
  return out;
}

/// a*v - b*p, both sorted; zeros dropped.
inline ZVec combine(const BigInt& a, const ZVec& v, const BigInt& b, const ZVec& p) {
  ZVec out;
  out.reserve(v.size() + p.size());
  std::size_t s = 0, t = 0;
  while (s < v.size() || t < p.size()) {
    if (t == p.size() || (s < v.size() && v[s].first < p[t].first)) {
      out.emplace_back(v[s].first, a * v[s].second);
      ++s;
    } else if (s == v.size() || p[t].first < v[s].first) {
      out.emplace_back(p[t].first, -b * p[t].second);
      ++t;
    } else {
      BigInt x = a * v[s].second - b * p[t].second;
      if (x != 0) out.emplace_back(v[s].first, std::move(x));
      ++s;
      ++t;
    }
  }
  return out;
}

}  // namespace detail

/// Rank of the span of `cols` (vectors in Q^rows) by fraction-free
/// elimination: each vector is scaled to a primitive integer vector and
/// reduced against the pivot owning its first nonzero index.
inline std::size_t rank_of(const std::vector<QVec>& cols, std::size_t rows) {
  std::vector<detail::ZVec> pivot(rows);
  std::size_t rank = 0;
  for (const auto& c : cols) {
    auto v = detail::integral_primitive(c);
    while (!v.empty()) {
      const auto& p = pivot[v.front().first];
      if (p.empty()) break;
      const BigInt a = p.front().second, b = v.front().second;
      v = detail::combine(a, v, b, p);
      detail::make_primitive(v);
    }
    if (v.empty()) continue;
    if (v.front().first >= rows) throw BadInput("vector index out of range in rank computation");
    pivot[v.front().first] = std::move(v);
    ++rank;
  }
  return rank;
}

/// Chain complex of finite-dimensional Q-vector spaces in degrees
/// 0..n_max. boundary[n] is b_n : C_n -> C_{n-1} stored by columns;
/// boundary[0] is empty.
struct ChainComplexQ {
  std::string name;
  std::vector<std::size_t> dims;
  std::vector<std::vector<QVec>> boundary;
  std::vector<std::vector<std::string>> labels;

  std::size_t n_max() const { return dims.empty() ? 0 : dims.size() - 1; }

  bool boundary_is_zero(std::size_t n) const {
    for (const auto& col : boundary[n])
      if (!col.empty()) return false;
    return true;
  }
};

/// b_n applied to a vector of C_n.
inline QVec apply_boundary(const ChainComplexQ& c, std::size_t n, const QVec& v) {
  std::map<std::size_t, Rational> acc;
  for (const auto& [j, x] : v)
    for (const auto& [i, y] : c.boundary[n][j]) acc[i] += x * y;
  QVec out;
  for (auto& [i, x] : acc)
    if (x != 0) out.emplace_back(i, std::move(x));
  return out;
}

/// Hard assertion b_n b_{n+1} = 0 for every computed degree.
inline void assert_complex(const ChainComplexQ& c) {
  for (std::size_t n = 1; n + 1 <= c.n_max(); ++n)
    for (std::size_t j = 0; j < c.boundary[n + 1].size(); ++j)
      if (!apply_boundary(c, n, c.boundary[n + 1][j]).empty())
        throw IdentityFailed(c.name + ": b_" + std::to_string(n) + " b_" + std::to_string(n + 1) + " = 0",
                             "column " + c.labels[n + 1][j]);
}

/// dim H_n for n = 0..n_max, treating the complex as zero above n_max.
inline std::vector<std::size_t> homology_dims(const ChainComplexQ& c) {
  std::vector<std::size_t> rank(c.dims.size() + 1, 0);
  for (std::size_t n = 1; n <= c.n_max(); ++n) rank[n] = rank_of(c.boundary[n], c.dims[n - 1]);
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= c.n_max(); ++n) out.push_back(c.dims[n] - rank[n] - rank[n + 1]);
  return out;
}

/// Homology as groups; Q-dimensions are reported as free ranks.
inline std::vector<PresentedAbelianGroup> homology_ranks(const ChainComplexQ& c) {
  std::vector<PresentedAbelianGroup> out;
  for (auto d : homology_dims(c)) {
    PresentedAbelianGroup g;
    g.free_rank = d;
    out.push_back(std::move(g));
  }
  return out;
}

namespace detail {

using Word = std::vector<std::size_t>;

inline std::size_t word_index(const Word& w, std::size_t d) {
  std::size_t x = 0;
  for (auto i : w) x = x * d + i;
  return x;
}

inline Word word_at(std::size_t x, std::size_t d, std::size_t len) {
  Word w(len);
  for (std::size_t p = len; p-- > 0;) {
    w[p] = x % d;
    x /= d;
  }
  return w;
}

inline std::string word_label(const Word& w) {
  std::string s;
  for (std::size_t p = 0; p < w.size(); ++p) s += (p ? "|e" : "e") + std::to_string(w[p]);
  return s;
}

inline std::size_t tensor_count(std::size_t d, std::size_t len, const Budgets& budgets, const std::string& what) {
  double est = 1;
  for (std::size_t p = 0; p < len; ++p) est *= static_cast<double>(d);
  if (est > static_cast<double>(budgets.tensor_dim))
    throw BudgetExceeded(what + ": " + std::to_string(d) + "^" + std::to_string(len) +
                             " basis tensors exceed the budget of " + std::to_string(budgets.tensor_dim),
                         est);
  return static_cast<std::size_t>(est);
}

/// Terms of the Hochschild-type boundary of one tensor word, as words of
/// length len-1 with coefficients. `wrap` adds (-1)^n a_n a_0 (x) ... .
inline std::vector<std::pair<Word, Rational>> word_boundary(const RationalAlgebra& a, const Word& w, bool wrap) {
  std::vector<std::pair<Word, Rational>> out;
  const std::size_t n = w.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational sign = (i % 2 == 0) ? 1 : -1;
    for (const auto& [k, x] : a.product(w[i], w[i + 1])) {
      Word v;
      v.reserve(n);
      v.insert(v.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      v.push_back(k);
      v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
      out.emplace_back(std::move(v), sign * x);
    }
  }
  if (wrap && n >= 1) {
    const Rational sign = (n % 2 == 0) ? 1 : -1;
    for (const auto& [k, x] : a.product(w[n], w[0])) {
      Word v{k};
      v.insert(v.end(), w.begin() + 1, w.begin() + static_cast<std::ptrdiff_t>(n));
      out.emplace_back(std::move(v), sign * x);
    }
  }
  return out;
}

/// Signed coinvariants of Z/(n+1) on the words of length n+1. Every word
/// maps to (class, sign) with w = sign * [class] in the quotient, or to no
/// class when its orbit is killed (the orbit's total sign is -1, so 2w = 0).
struct Coinvariants {
  std::vector<std::size_t> reps;  ///< word index of the least word of each surviving orbit
  std::vector<std::optional<std::pair<std::size_t, int>>> of_word;
};

inline Coinvariants coinvariants(std::size_t d, std::size_t len, std::size_t total) {
  const std::size_t n = len - 1;
  const int s = (n % 2 == 0) ? 1 : -1;
  Coinvariants q;
  q.of_word.assign(total, std::nullopt);
  std::vector<bool> seen(total, false);
  for (std::size_t x = 0; x < total; ++x) {
    if (seen[x]) continue;
    // x is the least word of its orbit since indices ascend lexicographically
    std::vector<std::pair<std::size_t, int>> orbit;
    Word w = word_at(x, d, len);
    int sign = 1;
    for (;;) {
      const std::size_t ix = word_index(w, d);
      if (!orbit.empty() && ix == x) break;
      orbit.emplace_back(ix, sign);
      seen[ix] = true;
      // rot(w) = s * w in the quotient, since w ~ lambda(w) = s * rot(w)
      std::rotate(w.rbegin(), w.rbegin() + 1, w.rend());
      sign *= s;
    }
    if (sign != 1) continue;  // back at x with total sign -1
    const std::size_t cls = q.reps.size();
    q.reps.push_back(x);
    for (const auto& [ix, sg] : orbit) q.of_word[ix] = std::make_pair(cls, sg);
  }
  return q;
}

}  // namespace detail

/// Connes' complex C^lambda: degree n is the quotient of A^{(x) n+1} by the
/// image of 1 - lambda, lambda(a_0 (x) ... (x) a_n) = (-1)^n a_n (x) a_0 (x) ... (x) a_{n-1},
/// with the boundary b induced from the tensor level.
inline ChainComplexQ build_connes_complex(const RationalAlgebra& a, std::size_t n_max, const Budgets& budgets = {}) {
  const std::size_t d = a.dim;
  ChainComplexQ c;
  c.name = "C^lambda(" + a.name + ")";
  std::vector<detail::Coinvariants> q;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::size_t total = detail::tensor_count(d, n + 1, budgets, "Connes complex degree " + std::to_string(n));
    q.push_back(detail::coinvariants(d, n + 1, total));
    c.dims.push_back(q.back().reps.size());
    std::vector<std::string> labels;
    for (auto x : q.back().reps) labels.push_back("[" + detail::word_label(detail::word_at(x, d, n + 1)) + "]");
    c.labels.push_back(std::move(labels));
  }
  c.boundary.emplace_back();
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<QVec> cols;
    for (auto x : q[n].reps) {
      std::map<std::size_t, Rational> acc;
      for (const auto& [v, coeff] : detail::word_boundary(a, detail::word_at(x, d, n + 1), true)) {
        const auto& cls = q[n - 1].of_word[detail::word_index(v, d)];
        if (cls) acc[cls->first] += coeff * cls->second;
      }
      QVec col;
      for (auto& [i, y] : acc)
        if (y != 0) col.emplace_back(i, std::move(y));
      cols.push_back(std::move(col));
    }
    c.boundary.push_back(std::move(cols));
  }
  assert_complex(c);
  return c;
}

/// Bar complex: degree n is A^{(x) n+1} with b' the boundary without the
/// wraparound term.
inline ChainComplexQ build_bar_complex(const RationalAlgebra& a, std::size_t n_max, const Budgets& budgets = {}) {
  const std::size_t d = a.dim;
  ChainComplexQ c;
  c.name = "C^bar(" + a.name + ")";
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::size_t total = detail::tensor_count(d, n + 1, budgets, "bar complex degree " + std::to_string(n));
    c.dims.push_back(total);
    std::vector<std::string> labels;
    for (std::size_t x = 0; x < total; ++x) labels.push_back(detail::word_label(detail::word_at(x, d, n + 1)));
    c.labels.push_back(std::move(labels));
  }
  c.boundary.emplace_back();
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<QVec> cols;
    for (std::size_t x = 0; x < c.dims[n]; ++x) {
      std::map<std::size_t, Rational> acc;
      for (const auto& [v, coeff] : detail::word_boundary(a, detail::word_at(x, d, n + 1), false))
        acc[detail::word_index(v, d)] += coeff;
      QVec col;
      for (auto& [i, y] : acc)
        if (y != 0) col.emplace_back(i, std::move(y));
      cols.push_back(std::move(col));
    }
    c.boundary.push_back(std::move(cols));
  }
  assert_complex(c);
  return c;
}

/// dim HC_n(A) for n = 0..n_max; builds one degree beyond n_max so the top
/// group is not truncated.
inline std::vector<std::size_t> cyclic_homology(const RationalAlgebra& a, std::size_t n_max, const Budgets& budgets = {}) {
  auto h = homology_dims(build_connes_complex(a, n_max + 1, budgets));
  h.pop_back();
  return h;
}

/// dim H^bar_n(A/Q) for n = 0..n_max, untruncated like cyclic_homology.
inline std::vector<std::size_t> bar_homology(const RationalAlgebra& a, std::size_t n_max, const Budgets& budgets = {}) {
  auto h = homology_dims(build_bar_complex(a, n_max + 1, budgets));
  h.pop_back();
  return h;
}

/// dim A/[A,A] computed directly from the commutators e_i e_j - e_j e_i.
inline std::size_t hc0_oracle(const RationalAlgebra& a) {
  std::vector<QVec> comms;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = i + 1; j < a.dim; ++j) {
      QVec v;
      for (std::size_t k = 0; k < a.dim; ++k)
        if (Rational x = a.c(i, j, k) - a.c(j, i, k); x != 0) v.emplace_back(k, x);
      comms.push_back(std::move(v));
    }
  return a.dim - rank_of(comms, a.dim);
}

/// A two-sided unit if one exists, found by solving u e_j = e_j = e_j u
/// exactly. Used to flag algebras entered without a declared unit.
inline std::optional<std::vector<Rational>> find_unit(const RationalAlgebra& a) {
  const std::size_t d = a.dim;
  // augmented rows [coeffs of u | rhs]
  std::vector<std::vector<Rational>> rows;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<Rational> left(d + 1), right(d + 1);
      for (std::size_t i = 0; i < d; ++i) {
        left[i] = a.c(i, j, k);
        right[i] = a.c(j, i, k);
      }
      left[d] = right[d] = (j == k) ? 1 : 0;
      rows.push_back(std::move(left));
      rows.push_back(std::move(right));
    }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < d && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational lead = rows[r][col];
    for (auto& x : rows[r]) x /= lead;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const Rational f = rows[i][col];
      for (std::size_t t = col; t <= d; ++t) rows[i][t] -= f * rows[r][t];
    }
    pivot_col.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (rows[i][d] != 0) return std::nullopt;
  std::vector<Rational> u(d);
  for (std::size_t i = 0; i < r; ++i) u[pivot_col[i]] = rows[i][d];
  return u;
}

/// Outcome of the bar-homology test for K-excisiveness over Q.
struct ExcisionVerdict {
  bool obstructed = false;
  std::size_t degree = 0;  ///< first degree with H^bar != 0, when obstructed
  std::size_t dim = 0;     ///< its dimension
  std::size_t checked_up_to = 0;
  std::vector<std::size_t> hbar;
  bool hidden_unit = false;  ///< a unit exists although none was declared

  std::string describe() const {
    if (obstructed) return "not K-excisive: obstruction in degree " + std::to_string(degree);
    return "no obstruction found up to degree " + std::to_string(checked_up_to);
  }
};

/// Computes H^bar_n(A/Q) for n <= n_check on an algebra entered without a
/// unit. A nonzero group is an obstruction to K-excisiveness; vanishing up
/// to n_check is only evidence, not a proof.
inline ExcisionVerdict excisiveness_verdict(const RationalAlgebra& a, std::size_t n_check, const Budgets& budgets = {}) {
  if (a.unit)
    throw UnitalInput("algebra '" + a.name + "' has a declared unit; unital algebras are K-excisive, check H^bar instead");
  ExcisionVerdict v;
  v.checked_up_to = n_check;
  v.hbar = bar_homology(a, n_check, budgets);
  v.hidden_unit = find_unit(a).has_value();
  for (std::size_t n = 0; n < v.hbar.size(); ++n)
    if (v.hbar[n] != 0) {
      v.obstructed = true;
      v.degree = n;
      v.dim = v.hbar[n];
      break;
    }
  return v;
}

/// Small catalog of Q-algebras with hand-entered structure constants.
namespace algebras {

inline RationalAlgebra rationals() {
  auto a = RationalAlgebra::zero_product("Q", 1);
  a.c(0, 0, 0) = 1;
  a.unit = std::vector<Rational>{1};
  return a;
}

/// Q x Q with idempotent basis.
inline RationalAlgebra q_times_q() {
  auto a = RationalAlgebra::zero_product("QxQ", 2);
  a.c(0, 0, 0) = 1;
  a.c(1, 1, 1) = 1;
  a.unit = std::vector<Rational>{1, 1};
  return a;
}

/// M_2(Q), basis e11, e12, e21, e22 as 0..3.
inline RationalAlgebra m2q() {
  auto a = RationalAlgebra::zero_product("M2Q", 4);
  auto idx = [](int r, int c) { return static_cast<std::size_t>(2 * r + c); };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) a.c(idx(i, j), idx(j, l), idx(i, l)) = 1;
  a.unit = std::vector<Rational>{1, 0, 0, 1};
  return a;
}

/// Q[e]/(e^2), basis 1, e.
inline RationalAlgebra dual_numbers() {
  auto a = RationalAlgebra::zero_product("Qeps", 2);
  a.c(0, 0, 0) = 1;
  a.c(0, 1, 1) = 1;
  a.c(1, 0, 1) = 1;
  a.unit = std::vector<Rational>{1, 0};
  return a;
}

/// Upper triangular 2x2, basis e11, e12, e22.
inline RationalAlgebra triangular() {
  auto a = RationalAlgebra::zero_product("T2Q", 3);
  a.c(0, 0, 0) = 1;
  a.c(0, 1, 1) = 1;
  a.c(1, 2, 1) = 1;
  a.c(2, 2, 2) = 1;
  a.unit = std::vector<Rational>{1, 0, 1};
  return a;
}

/// Q[Z/2], basis 1, t with t^2 = 1.
inline RationalAlgebra group_algebra_z2() {
  auto a = RationalAlgebra::zero_product("QZ2", 2);
  a.c(0, 0, 0) = 1;
  a.c(0, 1, 1) = 1;
  a.c(1, 0, 1) = 1;
  a.c(1, 1, 0) = 1;
  a.unit = std::vector<Rational>{1, 0};
  return a;
}

/// Q^d with zero multiplication.
inline RationalAlgebra square_zero(std::size_t d) { return RationalAlgebra::zero_product("SZ" + std::to_string(d), d); }

/// xQ[x]/(x^3), basis x, x^2.
inline RationalAlgebra nilpotent_x3() {
  auto a = RationalAlgebra::zero_product("NIL3", 2);
  a.c(0, 0, 1) = 1;
  return a;
}

/// Augmentation ideal of Q[Z/2], basis x = t - 1 with x^2 = -2x. It has
/// the unit -x/2 though none is declared.
inline RationalAlgebra augmentation_ideal_z2() {
  auto a = RationalAlgebra::zero_product("IZ2", 1);
  a.c(0, 0, 0) = -2;
  return a;
}

inline std::vector<RationalAlgebra> all() {
  return {rationals(),        q_times_q(),      m2q(),          dual_numbers(), triangular(),
          group_algebra_z2(), square_zero(1),   square_zero(2), nilpotent_x3(), augmentation_ideal_z2()};
}

}  // namespace algebras

}  // namespace klow
