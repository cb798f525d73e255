#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "klow/abelian_group.hpp"
#include "klow/error.hpp"
#include "klow/matrix_group.hpp"
#include "klow/rmatrix.hpp"

namespace klow {

/// All e in M_n(R) with e^2 = e, sorted lexicographically.
///
/// Backtracking fills row 0, column 0, row 1, column 1, ... and checks the
/// entry (i,j) of e^2 = e as soon as row i and column j are complete.
inline std::vector<RMatrix> enumerate_idempotents(const RingPtr& r, std::size_t n, const Budgets& budgets) {
  if (!r->has_one()) throw NotUnital(r->name());
  if (n == 0) return {RMatrix(r, 0)};
  struct Step {
    std::size_t i, j;
    std::vector<std::pair<std::size_t, std::size_t>> checks;  // run after this position is set
  };
  std::vector<Step> steps;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k; j < n; ++j) steps.push_back({k, j, {}});
    for (std::size_t j = 0; j < k; ++j) steps.back().checks.emplace_back(k, j);
    if (k + 1 < n)
      for (std::size_t i = k + 1; i < n; ++i) steps.push_back({i, k, {}});
    for (std::size_t i = 0; i <= k; ++i) steps.back().checks.emplace_back(i, k);
  }
  const auto& ring = *r;
  const Elem m = static_cast<Elem>(ring.order());
  std::vector<Elem> e(n * n, ring.zero());
  std::vector<RMatrix> out;
  std::uint64_t nodes = 0;
  auto holds = [&](std::size_t i, std::size_t j) {
    Elem acc = ring.zero();
    for (std::size_t k = 0; k < n; ++k) acc = ring.add(acc, ring.mul(e[i * n + k], e[k * n + j]));
    return acc == e[i * n + j];
  };
  // iterative depth-first search over positions
  std::vector<Elem> choice(steps.size(), 0);
  std::size_t depth = 0;
  choice[0] = 0;
  while (true) {
    if (choice[depth] == m) {
      if (depth == 0) break;
      --depth;
      ++choice[depth];
      continue;
    }
    if (++nodes > budgets.idempotent_nodes)
      throw BudgetExceeded("idempotent search in M_" + std::to_string(n) + "(" + r->name() + ")",
                           static_cast<double>(nodes));
    const Step& st = steps[depth];
    e[st.i * n + st.j] = choice[depth];
    bool ok = true;
    for (const auto& [ci, cj] : st.checks)
      if (!holds(ci, cj)) {
        ok = false;
        break;
      }
    if (!ok) {
      ++choice[depth];
      continue;
    }
    if (depth + 1 == steps.size()) {
      out.emplace_back(r, n, e);
      ++choice[depth];
      continue;
    }
    ++depth;
    choice[depth] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Places a at rows/columns pos_a and b at pos_b of a zero matrix of size
/// pos_a.size() + pos_b.size(); both operands are zero-padded first.
inline RMatrix interleave(const RMatrix& a, const RMatrix& b, const std::vector<std::size_t>& pos_a,
                          const std::vector<std::size_t>& pos_b) {
  if (a.ring != b.ring && a.ring->digest() != b.ring->digest()) throw RingMismatch("direct sum over different rings");
  const std::size_t d = pos_a.size();
  const RMatrix pa = pad(a, d), pb = pad(b, d);
  RMatrix c(a.ring, d + pos_b.size());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      c(pos_a[i], pos_a[j]) = pa(i, j);
      c(pos_b[i], pos_b[j]) = pb(i, j);
    }
  return c;
}

/// The shuffle sum: rows/columns ordered a_1, b_1, a_2, b_2, ... after padding
/// both operands to max(dim a, dim b).
inline RMatrix direct_sum(const RMatrix& a, const RMatrix& b) {
  const std::size_t d = std::max(a.n, b.n);
  std::vector<std::size_t> pa(d), pb(d);
  for (std::size_t i = 0; i < d; ++i) {
    pa[i] = 2 * i;
    pb[i] = 2 * i + 1;
  }
  return interleave(a, b, pa, pb);
}

/// Conjugation orbits of a set of n x n matrices under gl_generators.
struct OrbitPartition {
  std::shared_ptr<const MatrixCodec> codec;
  std::unordered_map<std::uint64_t, std::size_t> orbit_of;  ///< key -> orbit index
  std::vector<std::vector<std::uint64_t>> orbits;           ///< sorted keys per orbit

  std::optional<std::size_t> find(const RMatrix& e) const {
    auto it = orbit_of.find(codec->encode(e));
    if (it == orbit_of.end()) return std::nullopt;
    return it->second;
  }
};

/// Partitions `items` (closed under conjugation) into orbits under the
/// group generated by `conj`. Orbits are numbered by their minimal key.
inline OrbitPartition conjugation_orbits(const std::vector<RMatrix>& items, const RingPtr& r, std::size_t n,
                                         const std::vector<RMatrix>& conj) {
  OrbitPartition p;
  p.codec = make_codec(r, n);
  std::vector<std::uint64_t> keys;
  keys.reserve(items.size());
  for (const auto& e : items) keys.push_back(p.codec->encode(e));
  std::sort(keys.begin(), keys.end());
  std::vector<RMatrix> inv;
  for (const auto& s : conj) inv.push_back(inverse_or_throw(s));
  KeyArithmetic arith(*p.codec);
  std::vector<Elem> x(n * n), t(n * n);
  for (std::uint64_t k : keys) {
    if (p.orbit_of.count(k)) continue;
    const std::size_t id = p.orbits.size();
    std::vector<std::uint64_t> orbit{k};
    p.orbit_of.emplace(k, id);
    for (std::size_t q = 0; q < orbit.size(); ++q) {
      p.codec->decode_into(orbit[q], x.data());
      for (std::size_t s = 0; s < conj.size(); ++s) {
        const std::uint64_t xs_inv = arith.mul_decoded(x.data(), inv[s].entries.data());
        p.codec->decode_into(xs_inv, t.data());
        const std::uint64_t y = arith.mul_decoded(conj[s].entries.data(), t.data());
        if (p.orbit_of.emplace(y, id).second) orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    p.orbits.push_back(std::move(orbit));
  }
  return p;
}

struct IdempotentClass {
  RMatrix representative;          ///< lexicographically minimal member at `level`
  std::size_t level = 0;           ///< smallest n with a representative in Idem_n
  std::size_t orbit_size_at_level = 0;
};

/// Orbit classes of idempotents up to level `certified_to` with the partial
/// direct-sum table and its group completion.
struct K0Report {
  RingPtr ring;
  std::size_t certified_to = 0;
  std::vector<IdempotentClass> classes;  ///< sorted by (level, representative)
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sum_table;  ///< (i <= j) -> class of e_i + e_j
  std::size_t zero_class = 0;
  std::size_t unit_class = 0;  ///< class of p_1
  PresentedAbelianGroup k0;
  bool stabilized = false;
  bool rank_map_iso = false;
  OrbitPartition top_orbits;
  std::vector<std::size_t> class_of_orbit;  ///< top orbit index -> class index

  /// Class index of an idempotent of any dimension; dimensions above the
  /// certified level are reduced by deleting zero row/column pairs.
  std::size_t class_of(const RMatrix& e) const {
    RMatrix x = e;
    while (x.n > certified_to) {
      std::size_t drop = x.n;
      for (std::size_t i = x.n; i-- > 0 && drop == x.n;) {
        bool zero = true;
        for (std::size_t t = 0; t < x.n && zero; ++t) zero = x(i, t) == ring->zero() && x(t, i) == ring->zero();
        if (zero) drop = i;
      }
      if (drop == x.n)
        throw BudgetExceeded("idempotent of dimension " + std::to_string(e.n) + " lies beyond the certified level " +
                                 std::to_string(certified_to),
                             static_cast<double>(e.n));
      RMatrix y(ring, x.n - 1);
      for (std::size_t i = 0, a = 0; i < x.n; ++i) {
        if (i == drop) continue;
        for (std::size_t j = 0, b = 0; j < x.n; ++j) {
          if (j == drop) continue;
          y(a, b++) = x(i, j);
        }
        ++a;
      }
      x = std::move(y);
    }
    auto o = top_orbits.find(pad(x, certified_to));
    if (!o) throw BadInput("matrix " + e.str() + " is not an idempotent over " + ring->name());
    return class_of_orbit[*o];
  }

  IntVector class_vector(std::size_t c) const { return k0.generator(c); }
  IntVector class_vector(const RMatrix& e) const { return k0.generator(class_of(e)); }
};

inline K0Report k0_report(const RingPtr& r, std::size_t n_max, const Budgets& budgets) {
  if (!r->has_one()) throw NotUnital(r->name());
  if (n_max < 1) throw BadInput("k0 needs n_max >= 1");
  K0Report rep;
  rep.ring = r;
  rep.certified_to = n_max;
  std::vector<std::vector<RMatrix>> idems(n_max + 1);
  for (std::size_t l = 1; l <= n_max; ++l) idems[l] = enumerate_idempotents(r, l, budgets);
  rep.top_orbits = conjugation_orbits(idems[n_max], r, n_max, gl_generators(r, n_max));
  const std::size_t norb = rep.top_orbits.orbits.size();
  std::vector<std::optional<IdempotentClass>> by_orbit(norb);
  for (std::size_t l = 1; l <= n_max; ++l)
    for (const auto& e : idems[l]) {
      auto o = rep.top_orbits.find(pad(e, n_max));
      if (!o) throw IdentityFailed("k0 orbit lookup", "padded idempotent " + e.str() + " missing at top level");
      auto& c = by_orbit[*o];
      if (!c) c = IdempotentClass{e, l, 0};
      if (c->level == l) ++c->orbit_size_at_level;
    }
  std::vector<std::size_t> order(norb);
  for (std::size_t i = 0; i < norb; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return by_orbit[a]->level != by_orbit[b]->level ? by_orbit[a]->level < by_orbit[b]->level
                                                    : by_orbit[a]->representative < by_orbit[b]->representative;
  });
  rep.class_of_orbit.assign(norb, 0);
  for (std::size_t k = 0; k < norb; ++k) {
    rep.classes.push_back(*by_orbit[order[k]]);
    rep.class_of_orbit[order[k]] = k;
  }
  rep.zero_class = rep.class_of(RMatrix::zero(r, 1));
  rep.unit_class = rep.class_of(RMatrix::identity(r, 1));
  const std::size_t nc = rep.classes.size();
  IntMatrix rel(0, nc);
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = i; j < nc; ++j) {
      const auto& a = rep.classes[i];
      const auto& b = rep.classes[j];
      if (a.level + b.level > n_max) continue;
      const std::size_t k = rep.class_of(block_diag(a.representative, b.representative));
      rep.sum_table[{i, j}] = k;
      std::vector<BigInt> row(nc);
      row[i] += 1;
      row[j] += 1;
      row[k] -= 1;
      rel.append_row(row);
    }
  rep.k0 = group_from_presentation(nc, rel);
  rep.stabilized = true;
  for (std::size_t k = 0; k < nc; ++k) {
    if (rep.classes[k].level != n_max) continue;
    bool split = false;
    for (const auto& [ij, s] : rep.sum_table)
      if (s == k && rep.classes[ij.first].level < n_max && rep.classes[ij.second].level < n_max) split = true;
    if (!split) rep.stabilized = false;
  }
  const IntVector p1 = rep.k0.generator(rep.unit_class);
  rep.rank_map_iso = rep.k0.free_rank == 1 && rep.k0.torsion.empty() && (p1[0] == 1 || p1[0] == -1);
  return rep;
}

/// Homomorphism K0(source) -> K0(target) induced by a ring map that sends
/// idempotents to idempotents (unital or not), on class representatives.
inline GroupHom k0_induced(const RingMap& f, const K0Report& source, const K0Report& target) {
  std::vector<IntVector> images;
  for (const auto& c : source.classes) images.push_back(target.class_vector(map_matrix(f, c.representative)));
  return hom_from_generator_images(source.k0, target.k0, images);
}

}  // namespace klow
