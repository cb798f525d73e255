#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "klow/abelian_group.hpp"
#include "klow/error.hpp"
#include "klow/finite_ring.hpp"
#include "klow/kone.hpp"
#include "klow/kzero.hpp"
#include "klow/rmatrix.hpp"

namespace klow {

/// Ideal extension 0 -> A -> B -> C -> 0 with A given as a subset of B.
struct Extension {
  std::string name;
  RingPtr B;
  std::vector<Elem> ideal;  ///< sorted carrier indices of A inside B
  RingPtr C;
  RingMap proj;             ///< B -> C
  std::optional<RingMap> section;

  /// A as a ring; index i is ideal[i].
  RingPtr A() const { return rings::subring(B, ideal, name.empty() ? B->name() + "_ideal" : name + "_A"); }
};

/// Exhaustive validation of the extension axioms; throws BadInput with the
/// first violated condition.
inline void validate_extension(Extension& e) {
  if (!e.B || !e.C) throw BadInput("extension: missing ring");
  if (!e.B->has_one()) throw NotUnital(e.B->name());
  if (!e.C->has_one()) throw NotUnital(e.C->name());
  std::sort(e.ideal.begin(), e.ideal.end());
  e.ideal.erase(std::unique(e.ideal.begin(), e.ideal.end()), e.ideal.end());
  std::vector<char> in(e.B->order(), 0);
  for (Elem x : e.ideal) {
    if (x >= e.B->order()) throw BadInput("extension: ideal index " + std::to_string(x) + " out of range");
    in[x] = 1;
  }
  if (!in[e.B->zero()]) throw BadInput("extension: ideal lacks zero");
  for (Elem a : e.ideal) {
    for (Elem b : e.ideal)
      if (!in[e.B->add(a, b)]) throw BadInput("extension: ideal not closed under addition");
    if (!in[e.B->neg(a)]) throw BadInput("extension: ideal not closed under negation");
    for (Elem x = 0; x < e.B->order(); ++x)
      if (!in[e.B->mul(x, a)] || !in[e.B->mul(a, x)])
        throw BadInput("extension: ideal is not two-sided (" + std::to_string(x) + " * " + std::to_string(a) + ")");
  }
  e.proj.source = e.B;
  e.proj.target = e.C;
  if (e.proj.images.size() != e.B->order()) throw BadInput("extension: proj has wrong length");
  for (Elem v : e.proj.images)
    if (v >= e.C->order()) throw BadInput("extension: proj image out of range");
  if (!e.proj.is_ring_hom()) throw BadInput("extension: proj is not a ring homomorphism");
  if (!e.proj.is_unital()) throw BadInput("extension: proj is not unital");
  if (!e.proj.is_surjective()) throw BadInput("extension: proj is not surjective");
  for (Elem x = 0; x < e.B->order(); ++x)
    if ((e.proj(x) == e.C->zero()) != (in[x] != 0)) throw BadInput("extension: kernel of proj differs from the ideal");
  if (e.section) {
    e.section->source = e.C;
    e.section->target = e.B;
    if (e.section->images.size() != e.C->order()) throw BadInput("extension: section has wrong length");
    for (Elem v : e.section->images)
      if (v >= e.B->order()) throw BadInput("extension: section image out of range");
    if (!e.section->is_ring_hom()) throw BadInput("extension: section is not a ring homomorphism");
    for (Elem c = 0; c < e.C->order(); ++c)
      if (e.proj((*e.section)(c)) != c) throw BadInput("extension: proj o section is not the identity");
  }
}

/// K0 of a nonunital ring as ker(K0 A~ -> K0 Z/M).
struct NonunitalK0 {
  Unitalization tilde;
  K0Report tilde_report;
  K0Report scalar_report;
  GroupHom augmentation;
  Subgroup group;  ///< inside K0 A~

  const PresentedAbelianGroup& k0() const { return group.group; }
};

inline NonunitalK0 nonunital_k0(const RingPtr& a, std::uint64_t modulus, std::size_t n_max, const Budgets& budgets) {
  NonunitalK0 out;
  out.tilde = unitalize_finite(a, modulus);
  out.tilde_report = k0_report(out.tilde.ring, n_max, budgets);
  out.scalar_report = k0_report(out.tilde.scalars, n_max, budgets);
  out.augmentation = k0_induced(out.tilde.augmentation, out.tilde_report, out.scalar_report);
  out.group = kernel(out.augmentation);
  return out;
}

/// K1 of a nonunital ring at one level: the image of GL_n(A) = ker(GL_n A~ ->
/// GL_n Z/M) in K1 A~, cross-checked against ker(K1 A~ -> K1 Z/M).
struct NonunitalK1 {
  Unitalization tilde;
  K1Level tilde_level;
  K1Level scalar_level;
  GroupHom augmentation;
  Subgroup group;          ///< inside K1 A~
  bool kernel_agrees = false;
  std::uint64_t gl_a_order = 0;

  const PresentedAbelianGroup& k1() const { return group.group; }
};

inline NonunitalK1 nonunital_k1(const RingPtr& a, std::uint64_t modulus, std::size_t n, const Budgets& budgets,
                                GroupStore* store = nullptr) {
  NonunitalK1 out;
  out.tilde = unitalize_finite(a, modulus);
  const RingPtr& t = out.tilde.ring;
  out.tilde_level = k1_level(t, n, budgets, store);
  out.scalar_level = k1_level(out.tilde.scalars, n, budgets, store);
  std::vector<IntVector> images;
  for (const auto& rep : out.tilde_level.cosets->reps)
    images.push_back(out.scalar_level.class_vector(map_matrix(out.tilde.augmentation, rep)));
  out.augmentation = hom_from_generator_images(out.tilde_level.k1, out.scalar_level.k1, images);

  // GL_n(A): matrices 1 + x with x in M_n(A)
  const std::size_t q = a->order(), cells = n * n;
  long double space = 1;
  for (std::size_t i = 0; i < cells; ++i) space *= static_cast<long double>(q);
  if (space > static_cast<long double>(budgets.gl_candidates))
    throw BudgetExceeded("GL_" + std::to_string(n) + " of ideal " + a->name(), static_cast<double>(space));
  InvertibilityTester tester(t, n);
  const RMatrix one = RMatrix::identity(t, n);
  std::vector<IntVector> classes;
  std::vector<char> seen(out.tilde_level.cosets->size(), 0);
  std::vector<Elem> digit(cells, 0);
  for (std::uint64_t code = 0; code < static_cast<std::uint64_t>(space); ++code) {
    if (code > 0)
      for (std::size_t i = cells; i-- > 0;) {
        if (++digit[i] < q) break;
        digit[i] = 0;
      }
    RMatrix g = one;
    for (std::size_t i = 0; i < cells; ++i) g.entries[i] = t->add(one.entries[i], out.tilde.embedding(digit[i]));
    if (!tester.invertible(g.entries.data())) continue;
    ++out.gl_a_order;
    const std::size_t c = out.tilde_level.coset_of(g);
    if (seen[c]) continue;
    seen[c] = 1;
    classes.push_back(out.tilde_level.k1.generator(c));
  }
  out.group = subgroup_generated(out.tilde_level.k1, classes);
  out.kernel_agrees = subgroups_equal(out.group, kernel(out.augmentation));
  return out;
}

/// Entrywise lift along proj; picks the smallest preimage of each entry.
inline RMatrix lexicographic_lift(const Extension& e, const RMatrix& g) {
  std::vector<std::optional<Elem>> first(e.C->order());
  for (Elem x = 0; x < e.B->order(); ++x)
    if (!first[e.proj(x)]) first[e.proj(x)] = x;
  RMatrix out(e.B, g.n);
  for (std::size_t i = 0; i < g.entries.size(); ++i) out.entries[i] = *first[g.entries[i]];
  return out;
}

/// All preimages under proj, sorted, per element of C.
inline std::vector<std::vector<Elem>> proj_fibres(const Extension& e) {
  std::vector<std::vector<Elem>> f(e.C->order());
  for (Elem x = 0; x < e.B->order(); ++x) f[e.proj(x)].push_back(x);
  return f;
}

/// h(lift, lift*) = [[1,l],[0,1]] [[1,0],[-l*,1]] [[1,l],[0,1]] [[0,-1],[1,0]] over B.
inline RMatrix boundary_h(const RMatrix& lift, const RMatrix& lift_star) {
  const auto& b = lift.ring;
  const std::size_t n = lift.n;
  const RMatrix one = RMatrix::identity(b, n), zero = RMatrix::zero(b, n);
  const RMatrix up = blocks(one, lift, zero, one);
  const RMatrix low = blocks(one, zero, -lift_star, one);
  const RMatrix rot = blocks(zero, -one, one, zero);
  return up * low * up * rot;
}

struct BoundaryResult {
  IntVector k0a;      ///< coordinates in K0(A)
  RMatrix h;          ///< over B
  RMatrix idempotent; ///< h p_n h^-1 over A~
};

/// [h p_n h^-1] - [p_n] in K0(A). Asserts proj(h) = diag(g, g^-1).
inline BoundaryResult boundary_class(const Extension& e, const NonunitalK0& k0a, const RMatrix& g,
                                     std::optional<RMatrix> lift = std::nullopt,
                                     std::optional<RMatrix> lift_star = std::nullopt) {
  require_same_ring(g, RMatrix(e.C, g.n));
  const RMatrix ginv = inverse_or_throw(g);
  if (!lift) lift = lexicographic_lift(e, g);
  if (!lift_star) lift_star = lexicographic_lift(e, ginv);
  if (lift->n != g.n || lift_star->n != g.n) throw LiftMismatch("lift dimension differs from g");
  if (map_matrix(e.proj, *lift) != g) throw LiftMismatch("proj(lift) != g: " + lift->str() + " over " + g.str());
  if (map_matrix(e.proj, *lift_star) != ginv)
    throw LiftMismatch("proj(lift*) != g^-1: " + lift_star->str() + " over " + ginv.str());
  const std::size_t n = g.n;
  BoundaryResult out;
  out.h = boundary_h(*lift, *lift_star);
  if (map_matrix(e.proj, out.h) != block_diag(g, ginv))
    throw IdentityFailed("proj(h) = diag(g, g^-1)", out.h.str());
  const RMatrix p = RMatrix::projector(e.B, 2 * n, n);
  const RMatrix conj = out.h * p * inverse_or_throw(out.h);
  const RMatrix diff = conj - p;

  // move to A~: entry a + delta 1 becomes index(a) + delta |A|
  const std::size_t q = e.ideal.size();
  std::vector<std::optional<Elem>> pos(e.B->order());
  for (std::size_t i = 0; i < q; ++i) pos[e.ideal[i]] = static_cast<Elem>(i);
  const RingPtr& t = k0a.tilde.ring;
  out.idempotent = RMatrix(t, 2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) {
      const auto a = pos[diff(i, j)];
      if (!a) throw NotInIdeal("h p h^-1 - p has entry " + std::to_string(diff(i, j)) + " outside the ideal at (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
      out.idempotent(i, j) = static_cast<Elem>(*a + (i == j && i < n ? q : 0));
    }
  const IntVector v = add_vectors(k0a.tilde_report.class_vector(out.idempotent),
                                  scale_vector(k0a.tilde_report.class_vector(RMatrix::projector(t, 2 * n, n)), -1));
  out.k0a = k0a.group.coords_of(k0a.tilde_report.k0.reduce(v));
  return out;
}

/// One interior node of the six-term sequence.
struct NodeVerdict {
  std::string at;
  std::optional<BigInt> image_order;
  std::optional<BigInt> kernel_order;
  bool exact = false;
};

struct SixTermReport {
  std::string extension;
  PresentedAbelianGroup k1a, k1b, k1c, k0a, k0b, k0c;
  GroupHom k1a_b, k1b_c, boundary, k0a_b, k0b_c;
  std::vector<NodeVerdict> nodes;
  bool boundary_additive = false;
  bool k1a_kernel_agrees = false;
  std::optional<bool> k0a_b_injective;  ///< reported for split extensions
  bool exact() const {
    return std::all_of(nodes.begin(), nodes.end(), [](const NodeVerdict& v) { return v.exact; });
  }
};

struct SixTermLevels {
  std::size_t k0_nmax = 2;
  std::size_t k1_level = 2;
};

namespace detail {

inline NodeVerdict node_verdict(std::string at, const GroupHom& in, const GroupHom& out) {
  const Subgroup im = image(in), ker = kernel(out);
  return {std::move(at), im.order(), ker.order(), subgroups_equal(im, ker)};
}

/// A~ -> B, a + n -> a + n 1_B; a unital ring map because M is B's exponent.
inline RingMap tilde_to_b(const Extension& e, const Unitalization& u) {
  RingMap f{u.ring, e.B, {}};
  const std::size_t q = e.ideal.size();
  for (Elem x = 0; x < u.ring->order(); ++x)
    f.images.push_back(e.B->add(e.ideal[x % q], e.B->integer(static_cast<long long>(x / q))));
  return f;
}

/// Restricts h: ambient -> target to the subgroup s.
inline GroupHom restrict_to(const Subgroup& s, const GroupHom& h) {
  std::vector<IntVector> images;
  for (std::size_t c = 0; c < s.generators.cols(); ++c) images.push_back(h.apply(s.generators.col(c)));
  return hom_from_generator_images(s.group, h.target, images);
}

}  // namespace detail

/// Boundary on K1 C: each coset generator is evaluated on a GL_1 unit of the
/// same K1 class, falling back to the coset representative itself.
inline GroupHom boundary_hom(const Extension& e, const NonunitalK0& k0a, const K1Level& k1c) {
  std::vector<IntVector> images;
  const auto units = e.C->units();
  std::vector<IntVector> unit_classes;
  for (Elem u : units) {
    RMatrix d = RMatrix::identity(e.C, k1c.n);
    d(0, 0) = u;
    unit_classes.push_back(k1c.class_vector(d));
  }
  for (std::size_t c = 0; c < k1c.cosets->size(); ++c) {
    const IntVector want = k1c.k1.generator(c);
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < units.size() && !hit; ++i)
      if (k1c.k1.is_zero(add_vectors(want, scale_vector(unit_classes[i], -1)))) hit = i;
    const RMatrix g = hit ? RMatrix(e.C, 1, {units[*hit]}) : k1c.cosets->reps[c];
    images.push_back(boundary_class(e, k0a, g).k0a);
  }
  return hom_from_generator_images(k1c.k1, k0a.k0(), images);
}

/// d(uv) = d(u) + d(v) for all pairs of units of C.
inline bool boundary_additive_on_units(const Extension& e, const NonunitalK0& k0a) {
  const auto units = e.C->units();
  std::map<Elem, IntVector> d;
  for (Elem u : units) d[u] = boundary_class(e, k0a, RMatrix(e.C, 1, {u})).k0a;
  for (Elem u : units)
    for (Elem v : units) {
      const IntVector lhs = d[e.C->mul(u, v)];
      const IntVector rhs = add_vectors(d[u], d[v]);
      if (!k0a.k0().is_zero(add_vectors(lhs, scale_vector(rhs, -1)))) return false;
    }
  return true;
}

inline SixTermReport six_term_check(const Extension& e, const Budgets& budgets, SixTermLevels levels = {},
                                    GroupStore* store = nullptr) {
  SixTermReport rep;
  rep.extension = e.name;
  const RingPtr a = e.A();
  const std::uint64_t m = e.B->char_exponent();
  const NonunitalK0 k0a = nonunital_k0(a, m, levels.k0_nmax, budgets);
  const NonunitalK1 k1a = nonunital_k1(a, m, levels.k1_level, budgets, store);
  const K0Report k0b = k0_report(e.B, levels.k0_nmax, budgets);
  const K0Report k0c = k0_report(e.C, levels.k0_nmax, budgets);
  const K1Level k1b = k1_level(e.B, levels.k1_level, budgets, store);
  const K1Level k1c = k1_level(e.C, levels.k1_level, budgets, store);
  rep.k1a = k1a.k1();
  rep.k1b = k1b.k1;
  rep.k1c = k1c.k1;
  rep.k0a = k0a.k0();
  rep.k0b = k0b.k0;
  rep.k0c = k0c.k0;
  rep.k1a_kernel_agrees = k1a.kernel_agrees;

  const RingMap to_b = detail::tilde_to_b(e, k1a.tilde);
  rep.k1a_b = detail::restrict_to(k1a.group, k1_induced(to_b, k1a.tilde_level, k1b));
  rep.k1b_c = k1_induced(e.proj, k1b, k1c);
  rep.boundary = boundary_hom(e, k0a, k1c);
  rep.k0a_b = detail::restrict_to(k0a.group, k0_induced(detail::tilde_to_b(e, k0a.tilde), k0a.tilde_report, k0b));
  rep.k0b_c = k0_induced(e.proj, k0b, k0c);

  rep.nodes.push_back(detail::node_verdict("K1B", rep.k1a_b, rep.k1b_c));
  rep.nodes.push_back(detail::node_verdict("K1C", rep.k1b_c, rep.boundary));
  rep.nodes.push_back(detail::node_verdict("K0A", rep.boundary, rep.k0a_b));
  rep.nodes.push_back(detail::node_verdict("K0B", rep.k0a_b, rep.k0b_c));
  rep.boundary_additive = boundary_additive_on_units(e, k0a);
  if (e.section) rep.k0a_b_injective = is_injective(rep.k0a_b);
  return rep;
}

/// 1 + lambda e12 = [diag(mu,1), 1 + lambda/(mu-1) e12] in GL_1 T, with
/// [x,y] = x y x^-1 y^-1.
struct SwanWitness {
  Elem lambda = 0;
  Elem mu = 0;
  Elem x = 0, y = 0, commutator = 0, expected = 0;
  bool holds = false;
};

struct SwanReport {
  std::string field;
  PresentedAbelianGroup relative_k1;  ///< K1(T:I) at level 2
  PresentedAbelianGroup ideal_k1;     ///< K1(I) at level 2
  PresentedAbelianGroup field_additive;
  bool ideal_kernel_agrees = false;
  std::string t_strategy;
  bool t_complete = false;
  std::vector<SwanWitness> witnesses;
  bool witnesses_hold() const {
    return std::all_of(witnesses.begin(), witnesses.end(), [](const SwanWitness& w) { return w.holds; });
  }
  /// relative K1 trivial, K1(I) isomorphic to (k,+), all witnesses hold.
  bool pass() const {
    return relative_k1.trivial() && ideal_k1.same_group(field_additive) && ideal_kernel_agrees && witnesses_hold();
  }
};

inline std::vector<SwanWitness> swan_witnesses(const RingPtr& k) {
  if (!k->has_one()) throw NotUnital(k->name());
  if (k->order() <= 2) throw FieldTooSmall("Swan's example needs a field with at least 3 elements, got " + k->name());
  const RingPtr t = rings::triangular2(k);
  const std::size_t m = k->order();
  auto enc = [m](Elem a, Elem b, Elem c) { return static_cast<Elem>(a + b * m + c * m * m); };
  Elem mu = 0;
  for (Elem c = 0; c < m; ++c)
    if (c != k->zero() && c != k->one()) {
      mu = c;
      break;
    }
  const auto inv = k->inverse(k->sub(mu, k->one()));
  if (!inv) throw BadInput(k->name() + " is not a field");
  std::vector<SwanWitness> out;
  for (Elem lambda = 0; lambda < m; ++lambda) {
    SwanWitness w;
    w.lambda = lambda;
    w.mu = mu;
    w.x = enc(mu, k->zero(), k->one());
    w.y = enc(k->one(), k->mul(lambda, *inv), k->one());
    const auto xi = t->inverse(w.x), yi = t->inverse(w.y);
    if (!xi || !yi) throw IdentityFailed("Swan witness invertibility", std::to_string(lambda));
    w.commutator = t->mul(t->mul(w.x, w.y), t->mul(*xi, *yi));
    w.expected = enc(k->one(), lambda, k->one());
    w.holds = w.commutator == w.expected;
    out.push_back(w);
  }
  return out;
}

/// Swan's example over the field k: K1(T:I) = ker(K1 T -> K1(k x k)) against
/// K1(I) computed from I = eps k inside k[eps].
inline SwanReport swan_check(const RingPtr& k, const Budgets& budgets, GroupStore* store = nullptr) {
  SwanReport rep;
  rep.field = k->name();
  rep.witnesses = swan_witnesses(k);
  const std::size_t m = k->order();
  const RingPtr t = rings::triangular2(k);
  const RingPtr kk = rings::direct_product(k, k);
  RingMap diag{t, kk, {}};
  for (Elem x = 0; x < t->order(); ++x) diag.images.push_back(static_cast<Elem>(x % m + (x / (m * m)) * m));
  const K1Level k1t = k1_level(t, 2, budgets, store);
  const K1Level k1kk = k1_level(kk, 2, budgets, store);
  rep.t_strategy = k1t.strategy;
  rep.t_complete = k1t.complete;
  rep.relative_k1 = kernel(k1_induced(diag, k1t, k1kk)).group;

  const RingPtr de = rings::dual_numbers(k);
  std::vector<Elem> eps;
  for (Elem b = 0; b < m; ++b) eps.push_back(static_cast<Elem>(b * m));
  const NonunitalK1 ki = nonunital_k1(rings::subring(de, eps, "eps" + k->name()), de->char_exponent(), 2, budgets, store);
  rep.ideal_k1 = ki.k1();
  rep.ideal_kernel_agrees = ki.kernel_agrees;

  IntMatrix rel(0, m);
  for (Elem a = 0; a < m; ++a)
    for (Elem b = 0; b < m; ++b) {
      std::vector<BigInt> row(m);
      row[a] += 1;
      row[b] += 1;
      row[k->add(a, b)] -= 1;
      rel.append_row(row);
    }
  rep.field_additive = group_from_presentation(m, rel);
  return rep;
}

}  // namespace klow
