#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "klow/abelian_group.hpp"
#include "klow/error.hpp"
#include "klow/matrix_group.hpp"
#include "klow/rmatrix.hpp"

namespace klow {

/// Persistent storage for enumerated groups, keyed by (kind, ring, n).
class GroupStore {
 public:
  struct Entry {
    std::vector<std::uint64_t> elements;
    std::uint64_t flags = 0;
  };
  virtual ~GroupStore() = default;
  virtual std::optional<Entry> load(const std::string& kind, const FiniteRing& r, std::size_t n) = 0;
  virtual void save(const std::string& kind, const FiniteRing& r, std::size_t n, const Entry& e) = 0;
};

/// GL_n(R) / N at one level n, N the normal closure of E_n(R), abelianized.
struct K1Level {
  std::size_t n = 0;
  PresentedAbelianGroup k1;
  std::string strategy;               ///< "brute" or "generated"
  bool complete = false;              ///< coset count certified against |GL_n|
  std::optional<std::uint64_t> gl_order;
  std::uint64_t normal_order = 0;
  bool elementary_normal = false;     ///< E_n already normal in GL_n
  bool quotient_abelian = false;      ///< GL_n / N abelian before abelianizing
  std::shared_ptr<const MatrixGroup> normal;
  std::shared_ptr<const CosetSpace> cosets;

  std::size_t coset_of(const RMatrix& g) const { return cosets->coset_of(g); }
  IntVector class_vector(const RMatrix& g) const { return k1.generator(coset_of(g)); }
};

namespace detail {

inline std::shared_ptr<const MatrixGroup> restore_group(const RingPtr& r, std::size_t n, GroupStore::Entry e,
                                                        std::vector<RMatrix> gens, bool complete, std::string strategy) {
  auto g = std::make_shared<MatrixGroup>();
  g->ring = r;
  g->n = n;
  g->codec = make_codec(r, n);
  g->members = std::make_shared<KeySet>(g->codec->key_space());
  for (auto k : e.elements) g->members->insert(k);
  g->elements = std::move(e.elements);
  g->generators = std::move(gens);
  g->complete = complete;
  g->strategy = std::move(strategy);
  return g;
}

}  // namespace detail

/// Normal closure of E_n(R); flags bit 0 records whether E_n was already normal.
inline std::pair<std::shared_ptr<const MatrixGroup>, bool> stored_elementary_closure(const RingPtr& r, std::size_t n,
                                                                                     const Budgets& budgets,
                                                                                     GroupStore* store) {
  if (store)
    if (auto e = store->load("normal_closure_E", *r, n)) {
      const bool normal = (e->flags & 1u) != 0;
      return {detail::restore_group(r, n, std::move(*e), elementary_generators(r, n), false, "generated"), normal};
    }
  auto g = std::make_shared<MatrixGroup>(elementary_closure(r, n, budgets));
  const bool normal = g->generators.size() == elementary_generators(r, n).size();
  if (store) store->save("normal_closure_E", *r, n, {g->elements, normal ? 1u : 0u});
  return {g, normal};
}

inline std::shared_ptr<const MatrixGroup> stored_gl_brute(const RingPtr& r, std::size_t n, const Budgets& budgets,
                                                          GroupStore* store) {
  if (store)
    if (auto e = store->load("gl_brute", *r, n))
      return detail::restore_group(r, n, std::move(*e), gl_generators(r, n), true, "brute");
  auto g = std::make_shared<MatrixGroup>(enumerate_gl_brute(r, n, budgets));
  if (store) store->save("gl_brute", *r, n, {g->elements, 0});
  return g;
}

inline bool gl_brute_feasible(const RingPtr& r, std::size_t n, const Budgets& budgets) {
  long double space = 1;
  for (std::size_t t = 0; t < n * n; ++t) space *= static_cast<long double>(r->order());
  return space <= static_cast<long double>(budgets.gl_candidates);
}

/// K1 at level n >= 2. `strategy` is "auto", "brute" or "generated"; brute
/// enumerates GL_n to certify that the cosets exhaust it.
inline K1Level k1_level(const RingPtr& r, std::size_t n, const Budgets& budgets, GroupStore* store = nullptr,
                        const std::string& strategy = "auto") {
  if (!r->has_one()) throw NotUnital(r->name());
  if (n < 2) throw BadInput("K1 levels start at n = 2");
  if (strategy != "auto" && strategy != "brute" && strategy != "generated")
    throw BadInput("unknown GL strategy '" + strategy + "'");
  K1Level lv;
  lv.n = n;
  auto [normal, e_normal] = stored_elementary_closure(r, n, budgets, store);
  lv.normal = normal;
  lv.normal_order = normal->size();
  lv.elementary_normal = e_normal;
  auto cs = std::make_shared<CosetSpace>(enumerate_cosets(lv.normal, gl_generators(r, n)));
  lv.cosets = cs;
  const bool brute = strategy == "brute" || (strategy == "auto" && gl_brute_feasible(r, n, budgets));
  if (brute) {
    auto gl = stored_gl_brute(r, n, budgets, store);
    lv.gl_order = gl->size();
    if (lv.normal_order * cs->size() != gl->size())
      throw IdentityFailed("GL_" + std::to_string(n) + "(" + r->name() + ") coset count",
                           std::to_string(lv.normal_order) + " * " + std::to_string(cs->size()) +
                               " != " + std::to_string(gl->size()));
    lv.complete = true;
    lv.strategy = "brute";
  } else {
    lv.strategy = "generated";
  }
  lv.k1 = abelianize_cosets(*cs);
  lv.quotient_abelian = quotient_is_abelian(*cs);
  return lv;
}

/// Abelianized unit group R*_ab from its Cayley graph on the unit generators.
struct UnitGroupAb {
  std::vector<Elem> units;  ///< presentation generators, in carrier order
  PresentedAbelianGroup group;
  IntVector class_vector(Elem u) const {
    for (std::size_t i = 0; i < units.size(); ++i)
      if (units[i] == u) return group.generator(i);
    throw BadInput("not a unit");
  }
};

inline UnitGroupAb abelianized_units(const RingPtr& r) {
  UnitGroupAb u;
  u.units = r->units();
  const std::size_t k = u.units.size();
  std::vector<std::size_t> pos(r->order(), 0);
  for (std::size_t i = 0; i < k; ++i) pos[u.units[i]] = i;
  IntMatrix rel(0, k);
  std::vector<BigInt> row(k);
  row[pos[r->one()]] = 1;
  rel.append_row(row);
  for (std::size_t i = 0; i < k; ++i)
    for (Elem s : r->unit_generators()) {
      std::vector<BigInt> rw(k);
      rw[i] += 1;
      rw[pos[s]] += 1;
      rw[pos[r->mul(u.units[i], s)]] -= 1;
      rel.append_row(rw);
    }
  u.group = group_from_presentation(k, rel);
  return u;
}

struct K1Report {
  RingPtr ring;
  std::vector<K1Level> levels;
  std::optional<bool> stable;  ///< level 2 -> 3 map is an isomorphism (when both computed)
  UnitGroupAb units_ab;
  GroupHom units_map;          ///< R*_ab -> K1 at the lowest level
  bool units_map_injective = false;
  bool units_map_surjective = false;

  const K1Level& top() const { return levels.back(); }
};

/// Levels computed by default: {2,3} when GL_3 is within the brute budget, else {2}.
inline std::vector<std::size_t> default_k1_levels(const RingPtr& r, const Budgets& budgets) {
  if (gl_brute_feasible(r, 3, budgets)) return {2, 3};
  return {2};
}

/// K1(source level) -> K1(target level) induced by g -> diag(g, 1, ...).
inline GroupHom k1_stabilization_map(const K1Level& lo, const K1Level& hi) {
  std::vector<IntVector> images;
  const auto& r = lo.normal->ring;
  for (const auto& rep : lo.cosets->reps) images.push_back(hi.class_vector(block_diag(rep, RMatrix::identity(r, hi.n - lo.n))));
  return hom_from_generator_images(lo.k1, hi.k1, images);
}

/// K1(R) -> K1(S) at equal level induced by a unital ring map.
inline GroupHom k1_induced(const RingMap& f, const K1Level& source, const K1Level& target) {
  std::vector<IntVector> images;
  for (const auto& rep : source.cosets->reps) images.push_back(target.class_vector(map_matrix(f, rep)));
  return hom_from_generator_images(source.k1, target.k1, images);
}

inline K1Report k1_report(const RingPtr& r, std::vector<std::size_t> levels, const Budgets& budgets,
                          GroupStore* store = nullptr) {
  if (!r->has_one()) throw NotUnital(r->name());
  if (levels.empty()) levels = default_k1_levels(r, budgets);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  K1Report rep;
  rep.ring = r;
  for (std::size_t n : levels) rep.levels.push_back(k1_level(r, n, budgets, store));
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i)
    if (rep.levels[i].n == 2 && rep.levels[i + 1].n == 3)
      rep.stable = is_isomorphism(k1_stabilization_map(rep.levels[i], rep.levels[i + 1]));
  rep.units_ab = abelianized_units(r);
  const K1Level& low = rep.levels.front();
  std::vector<IntVector> images;
  for (Elem u : rep.units_ab.units) {
    RMatrix d = RMatrix::identity(r, low.n);
    d(0, 0) = u;
    images.push_back(low.class_vector(d));
  }
  rep.units_map = hom_from_generator_images(rep.units_ab.group, low.k1, images);
  rep.units_map_injective = is_injective(rep.units_map);
  rep.units_map_surjective = is_surjective(rep.units_map);
  return rep;
}

/// Elementary factors whose product is diag(alpha, alpha^-1), following
/// [[1,a],[0,1]] [[1,0],[-a^-1,1]] [[1,a],[0,1]] [[0,-1],[1,0]]. Identity
/// factors are omitted.
inline std::vector<RMatrix> whitehead_factorization(const RMatrix& alpha) {
  const RMatrix inv = inverse_or_throw(alpha);
  const auto& r = alpha.ring;
  const std::size_t n = alpha.n;
  std::vector<RMatrix> out;
  auto upper = [&](const RMatrix& x) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (x(i, j) != r->zero()) out.push_back(RMatrix::elementary(r, 2 * n, i, n + j, x(i, j)));
  };
  auto lower = [&](const RMatrix& x) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (x(i, j) != r->zero()) out.push_back(RMatrix::elementary(r, 2 * n, n + i, j, x(i, j)));
  };
  upper(alpha);
  lower(-inv);
  upper(alpha);
  // [[0,-1],[1,0]] on each coordinate pair (i, n+i) = (1 - e)(1 + e^t)(1 - e)
  const Elem one = r->one(), minus_one = r->neg(r->one());
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(RMatrix::elementary(r, 2 * n, i, n + i, minus_one));
    out.push_back(RMatrix::elementary(r, 2 * n, n + i, i, one));
    out.push_back(RMatrix::elementary(r, 2 * n, i, n + i, minus_one));
  }
  return out;
}

inline RMatrix product(const std::vector<RMatrix>& factors, const RingPtr& r, std::size_t n) {
  RMatrix p = RMatrix::identity(r, n);
  for (const auto& f : factors) p = p * f;
  return p;
}

/// Outcome of one exactly checked identity.
struct IdentityCheck {
  std::string identity;
  bool pass = true;
  std::string witness;  ///< first failing instance, empty on success
};

namespace detail {

/// Dense rows x cols matrix over a ring, for the rectangular maps a -> W a V.
struct Rect {
  std::size_t rows = 0, cols = 0;
  std::vector<Elem> e;
  Elem at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
};

inline Rect rect_mul(const FiniteRing& r, const Rect& a, const Rect& b) {
  Rect c{a.rows, b.cols, std::vector<Elem>(a.rows * b.cols, r.zero())};
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Elem x = a.at(i, k);
      if (x == r.zero()) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.e[i * c.cols + j] = r.add(c.e[i * c.cols + j], r.mul(x, b.at(k, j)));
    }
  return c;
}

}  // namespace detail

/// Conjugation identities for J2, J3 in M_4(R) and multiplicativity of
/// a -> W a V on M_2(R) for pairs with V W = 1.
inline std::vector<IdentityCheck> structural_identities_check(const RingPtr& r) {
  if (!r->has_one()) throw NotUnital(r->name());
  std::vector<IdentityCheck> out;
  const Elem one = r->one(), zero = r->zero();
  auto perm4 = [&](std::vector<int> rows) {
    RMatrix m(r, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = rows[i * 4 + j] ? one : zero;
    return m;
  };
  const RMatrix J2 = perm4({0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  const RMatrix J3 = perm4({0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  const RMatrix I4 = RMatrix::identity(r, 4);
  {
    IdentityCheck c{"J2^2 = 1", J2 * J2 == I4, ""};
    if (!c.pass) c.witness = (J2 * J2).str();
    out.push_back(c);
  }
  {
    IdentityCheck c{"J3^3 = 1", J3 * J3 * J3 == I4 && J3 * J3 != I4 && J3 != I4, ""};
    if (!c.pass) c.witness = (J3 * J3 * J3).str();
    out.push_back(c);
  }
  for (const auto& [name, J] : {std::pair<std::string, RMatrix>{"sigma_2 j_0 = j_1", J2}, {"sigma_3 j_0 = j_1", J3}}) {
    IdentityCheck c{name, true, ""};
    const RMatrix Jinv = inverse_or_throw(J);
    for (Elem a = 0; a < r->order() && c.pass; ++a) {
      RMatrix j0(r, 4), j1(r, 4);
      j0(0, 0) = a;
      j1(1, 1) = a;
      if (J * j0 * Jinv != j1) {
        c.pass = false;
        c.witness = "a=" + std::to_string(a);
      }
    }
    out.push_back(c);
  }
  // (W, V) with W: (k' x k), V: (k x k'), V W = 1_k, for k = 2
  const std::size_t k = 2;
  auto make_pair = [&](const std::string& name, std::size_t kp, auto w_pos) {
    detail::Rect W{kp, k, std::vector<Elem>(kp * k, zero)}, V{k, kp, std::vector<Elem>(k * kp, zero)};
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t p = w_pos(i);
      W.e[p * k + i] = one;
      V.e[i * kp + p] = one;
    }
    return std::tuple<std::string, detail::Rect, detail::Rect>{name, W, V};
  };
  std::vector<std::tuple<std::string, detail::Rect, detail::Rect>> pairs{
      make_pair("phi^{alpha_0,beta_0}", 2 * k, [](std::size_t i) { return 2 * i + 1; }),  // e_{2i,i}, 1-based
      make_pair("phi^{alpha_1,beta_1}", 2 * k, [](std::size_t i) { return 2 * i; }),      // e_{2i-1,i}
      make_pair("phi^{alpha,alpha*}", k + 1, [](std::size_t i) { return i + 1; })};      // e_{i+1,i}
  const std::size_t m = r->order();
  std::uint64_t total = 1;
  for (std::size_t t = 0; t < k * k; ++t) total *= m;
  auto decode = [&](std::uint64_t x) {
    detail::Rect a{k, k, std::vector<Elem>(k * k)};
    for (std::size_t t = k * k; t-- > 0;) {
      a.e[t] = static_cast<Elem>(x % m);
      x /= m;
    }
    return a;
  };
  for (const auto& [name, W, V] : pairs) {
    IdentityCheck vw{name + ": V W = 1", true, ""};
    auto prod = detail::rect_mul(*r, V, W);
    for (std::size_t i = 0; i < k && vw.pass; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (prod.at(i, j) != (i == j ? one : zero)) vw.pass = false;
    out.push_back(vw);
    IdentityCheck mult{name + " multiplicative on M_2", true, ""};
    std::vector<detail::Rect> images;
    std::vector<detail::Rect> mats;
    for (std::uint64_t x = 0; x < total; ++x) {
      mats.push_back(decode(x));
      images.push_back(detail::rect_mul(*r, detail::rect_mul(*r, W, mats.back()), V));
    }
    auto index = [&](const detail::Rect& a) {
      std::uint64_t x = 0;
      for (Elem v : a.e) x = x * m + v;
      return x;
    };
    for (std::uint64_t x = 0; x < total && mult.pass; ++x)
      for (std::uint64_t y = 0; y < total; ++y) {
        auto lhs = detail::rect_mul(*r, images[x], images[y]);
        const auto& rhs = images[index(detail::rect_mul(*r, mats[x], mats[y]))];
        if (lhs.e != rhs.e) {
          mult.pass = false;
          mult.witness = "a=" + std::to_string(x) + ", a'=" + std::to_string(y);
          break;
        }
      }
    out.push_back(mult);
  }
  return out;
}

/// Uniform element of GL_n(R) by rejection sampling.
inline RMatrix random_invertible(const RingPtr& r, std::size_t n, std::mt19937& rng) {
  for (;;) {
    RMatrix g(r, n);
    for (auto& x : g.entries) x = static_cast<Elem>(rng() % r->order());
    if (is_invertible(g)) return g;
  }
}

/// Whitehead factorization on `count` random elements of GL_n(R): every
/// emitted factor is elementary and the product is diag(a, a^-1).
inline IdentityCheck whitehead_suite(const RingPtr& r, std::size_t n, std::size_t count, std::mt19937& rng) {
  IdentityCheck c{"whitehead factors of " + std::to_string(count) + " random GL_" + std::to_string(n) + " elements", true, ""};
  for (std::size_t t = 0; t < count && c.pass; ++t) {
    const RMatrix a = random_invertible(r, n, rng);
    const auto fs = whitehead_factorization(a);
    for (const auto& f : fs)
      if (!f.is_elementary()) {
        c.pass = false;
        c.witness = a.str() + ": factor " + f.str() + " is not elementary";
      }
    if (c.pass && product(fs, r, 2 * n) != block_diag(a, inverse_or_throw(a))) {
      c.pass = false;
      c.witness = a.str() + ": product differs from diag(a, a^-1)";
    }
  }
  return c;
}

}  // namespace klow
