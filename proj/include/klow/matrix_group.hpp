#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "klow/abelian_group.hpp"
#include "klow/error.hpp"
#include "klow/rmatrix.hpp"

namespace klow {

/// Budgets shared by the enumeration routines.
struct Budgets {
  std::uint64_t gl_candidates = 2'000'000;     ///< max |R|^{n^2} for brute enumeration
  std::uint64_t closure_elements = 20'000'000; ///< max elements in a generated subgroup
  std::uint64_t idempotent_nodes = 400'000'000; ///< max backtracking nodes for idempotents
  std::uint64_t tensor_dim = 2000;             ///< max basis tensors per homology degree
};

/// Multiplies key-encoded matrices with preallocated scratch space.
class KeyArithmetic {
 public:
  explicit KeyArithmetic(const MatrixCodec& codec)
      : codec_(codec), ring_(codec.ring().get()), n_(codec.dim()), a_(n_ * n_), b_(n_ * n_), c_(n_ * n_) {}

  std::uint64_t mul(std::uint64_t x, std::uint64_t y) {
    codec_.decode_into(x, a_.data());
    codec_.decode_into(y, b_.data());
    return mul_decoded(a_.data(), b_.data());
  }
  /// x decoded in `a`, y decoded in `b`.
  std::uint64_t mul_decoded(const Elem* a, const Elem* b) {
    const auto& r = *ring_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Elem acc = r.zero();
        for (std::size_t k = 0; k < n_; ++k) acc = r.add(acc, r.mul(a[i * n_ + k], b[k * n_ + j]));
        c_[i * n_ + j] = acc;
      }
    return codec_.encode(c_.data());
  }

 private:
  const MatrixCodec& codec_;
  const FiniteRing* ring_;
  std::size_t n_;
  std::vector<Elem> a_, b_, c_;
};

/// Kernel test g v = 0 over all nonzero column vectors, with reusable buffers.
class InvertibilityTester {
 public:
  InvertibilityTester(RingPtr r, std::size_t n) : ring_(std::move(r)), n_(n), v_(n) {
    if (!ring_->has_one()) throw NotUnital(ring_->name());
    total_ = 1;
    for (std::size_t i = 0; i < n; ++i) total_ *= ring_->order();
  }

  bool invertible(const Elem* g) {
    const auto& r = *ring_;
    const std::size_t m = r.order();
    std::fill(v_.begin(), v_.end(), r.zero());
    // odometer over nonzero vectors; the zero element need not be index 0
    std::vector<Elem>& v = v_;
    std::vector<Elem> digit(n_, 0);
    for (std::uint64_t code = 0; code < total_; ++code) {
      if (code > 0)
        for (std::size_t i = n_; i-- > 0;) {
          if (++digit[i] < m) break;
          digit[i] = 0;
        }
      for (std::size_t i = 0; i < n_; ++i) v[i] = digit[i];
      bool is_zero_vec = true;
      for (std::size_t i = 0; i < n_ && is_zero_vec; ++i) is_zero_vec = v[i] == r.zero();
      if (is_zero_vec) continue;
      bool kills = true;
      for (std::size_t i = 0; i < n_ && kills; ++i) {
        Elem acc = r.zero();
        for (std::size_t k = 0; k < n_; ++k) acc = r.add(acc, r.mul(g[i * n_ + k], v[k]));
        kills = acc == r.zero();
      }
      if (kills) return false;
    }
    return true;
  }

 private:
  RingPtr ring_;
  std::size_t n_;
  std::uint64_t total_ = 1;
  std::vector<Elem> v_;
};

/// A finite set of invertible n x n matrices closed under products.
struct MatrixGroup {
  RingPtr ring;
  std::size_t n = 0;
  std::shared_ptr<const MatrixCodec> codec;
  std::vector<std::uint64_t> elements;  ///< sorted keys
  std::shared_ptr<KeySet> members;
  std::vector<RMatrix> generators;
  bool complete = false;  ///< true when known to be all of GL_n
  std::string strategy;   ///< "brute" or "generated"

  std::size_t size() const noexcept { return elements.size(); }
  bool contains(std::uint64_t key) const { return members->contains(key); }
  bool contains(const RMatrix& g) const { return members->contains(codec->encode(g)); }
  RMatrix element(std::size_t i) const { return codec->decode(elements[i]); }
};

/// Generators of GL_n(R): 1 + a e_ij (a in an additive generating set),
/// diag(u,1,...,1) (u in a unit-group generating set), adjacent transpositions.
inline std::vector<RMatrix> gl_generators(const RingPtr& r, std::size_t n) {
  std::vector<RMatrix> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        for (Elem a : r->additive_generators()) gens.push_back(RMatrix::elementary(r, n, i, j, a));
  for (Elem u : r->unit_generators()) {
    RMatrix d = RMatrix::identity(r, n);
    d(0, 0) = u;
    gens.push_back(d);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<std::size_t> perm(n);
    for (std::size_t t = 0; t < n; ++t) perm[t] = t;
    std::swap(perm[i], perm[i + 1]);
    gens.push_back(permutation_matrix(r, perm));
  }
  return gens;
}

/// 1 + a e_ij for a in an additive generating set of R and i != j.
inline std::vector<RMatrix> elementary_generators(const RingPtr& r, std::size_t n) {
  std::vector<RMatrix> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        for (Elem a : r->additive_generators()) gens.push_back(RMatrix::elementary(r, n, i, j, a));
  return gens;
}

inline std::shared_ptr<const MatrixCodec> make_codec(const RingPtr& r, std::size_t n) {
  return std::make_shared<const MatrixCodec>(r, n);
}

/// Every invertible matrix, by testing all |R|^{n^2} candidates.
inline MatrixGroup enumerate_gl_brute(const RingPtr& r, std::size_t n, const Budgets& budgets) {
  if (!r->has_one()) throw NotUnital(r->name());
  long double space = 1;
  for (std::size_t t = 0; t < n * n; ++t) space *= static_cast<long double>(r->order());
  if (space > static_cast<long double>(budgets.gl_candidates))
    throw BudgetExceeded("GL_" + std::to_string(n) + "(" + r->name() + ") brute enumeration: candidate count over budget",
                         static_cast<double>(space));
  MatrixGroup g;
  g.ring = r;
  g.n = n;
  g.codec = make_codec(r, n);
  g.members = std::make_shared<KeySet>(g.codec->key_space());
  g.generators = gl_generators(r, n);
  g.complete = true;
  g.strategy = "brute";
  InvertibilityTester tester(r, n);
  std::vector<Elem> e(n * n);
  const std::uint64_t total = g.codec->key_space();
  for (std::uint64_t k = 0; k < total; ++k) {
    g.codec->decode_into(k, e.data());
    if (tester.invertible(e.data())) {
      g.elements.push_back(k);
      g.members->insert(k);
    }
  }
  return g;
}

namespace detail {

/// Extends the closed set (keys, set) by right multiplication with `gens`,
/// starting the scan at index `from`.
inline void close_under(std::vector<std::uint64_t>& keys, KeySet& set, const MatrixCodec& codec,
                        const std::vector<RMatrix>& gens, std::size_t from, std::uint64_t limit,
                        const std::string& what) {
  KeyArithmetic arith(codec);
  const std::size_t nn = codec.dim() * codec.dim();
  std::vector<Elem> x(nn);
  for (std::size_t i = from; i < keys.size(); ++i) {
    codec.decode_into(keys[i], x.data());
    for (const auto& s : gens) {
      const std::uint64_t y = arith.mul_decoded(x.data(), s.entries.data());
      if (set.insert(y)) {
        keys.push_back(y);
        if (keys.size() > limit) throw BudgetExceeded(what + ": closure exceeds element budget", static_cast<double>(keys.size()));
      }
    }
  }
}

}  // namespace detail

/// Subgroup generated by `gens` (finite, so closure under right multiplication suffices).
inline MatrixGroup generated_subgroup(const RingPtr& r, std::size_t n, std::vector<RMatrix> gens, const Budgets& budgets,
                                      const std::string& what = "generated subgroup") {
  MatrixGroup g;
  g.ring = r;
  g.n = n;
  g.codec = make_codec(r, n);
  g.members = std::make_shared<KeySet>(g.codec->key_space());
  g.generators = std::move(gens);
  g.strategy = "generated";
  const std::uint64_t id = g.codec->encode(RMatrix::identity(r, n));
  g.elements.push_back(id);
  g.members->insert(id);
  detail::close_under(g.elements, *g.members, *g.codec, g.generators, 0, budgets.closure_elements, what);
  std::sort(g.elements.begin(), g.elements.end());
  return g;
}

/// GL_n(R): brute force within budget, else the subgroup generated by gl_generators.
inline MatrixGroup enumerate_gl(const RingPtr& r, std::size_t n, const Budgets& budgets, const std::string& strategy = "auto") {
  if (!r->has_one()) throw NotUnital(r->name());
  long double space = 1;
  for (std::size_t t = 0; t < n * n; ++t) space *= static_cast<long double>(r->order());
  const bool brute = strategy == "brute" || (strategy == "auto" && space <= static_cast<long double>(budgets.gl_candidates));
  if (strategy != "auto" && strategy != "brute" && strategy != "generated") throw BadInput("unknown GL strategy '" + strategy + "'");
  if (brute) return enumerate_gl_brute(r, n, budgets);
  return generated_subgroup(r, n, gl_generators(r, n), budgets, "GL_" + std::to_string(n) + "(" + r->name() + ")");
}

/// Normal closure of the subgroup generated by `gens` under conjugation by `conj`.
/// The result's `generators` list every generator added, conjugates included.
inline MatrixGroup normal_closure(const RingPtr& r, std::size_t n, std::vector<RMatrix> gens, const std::vector<RMatrix>& conj,
                                  const Budgets& budgets, const std::string& what = "normal closure") {
  MatrixGroup h;
  h.ring = r;
  h.n = n;
  h.codec = make_codec(r, n);
  h.members = std::make_shared<KeySet>(h.codec->key_space());
  h.strategy = "generated";
  const std::uint64_t id = h.codec->encode(RMatrix::identity(r, n));
  h.elements.push_back(id);
  h.members->insert(id);
  std::vector<RMatrix> conj_inv;
  for (const auto& s : conj) conj_inv.push_back(inverse_or_throw(s));
  std::vector<RMatrix> pending = std::move(gens);
  while (!pending.empty()) {
    std::vector<RMatrix> fresh;
    for (auto& t : pending)
      if (!h.contains(t)) fresh.push_back(std::move(t));
    pending.clear();
    if (fresh.empty()) break;
    // old elements times every generator (old and new) stay covered by
    // rescanning from the start with the full generator list.
    for (auto& t : fresh) h.generators.push_back(std::move(t));
    detail::close_under(h.elements, *h.members, *h.codec, h.generators, 0, budgets.closure_elements, what);
    for (const auto& t : h.generators)
      for (std::size_t s = 0; s < conj.size(); ++s) {
        RMatrix c = conj[s] * t * conj_inv[s];
        if (!h.contains(c)) pending.push_back(std::move(c));
      }
  }
  std::sort(h.elements.begin(), h.elements.end());
  return h;
}

/// Normal closure of E_n(R) under conjugation by the GL generators.
inline MatrixGroup elementary_closure(const RingPtr& r, std::size_t n, const Budgets& budgets) {
  if (n < 2) throw BadInput("elementary closure needs n >= 2");
  return normal_closure(r, n, elementary_generators(r, n), gl_generators(r, n), budgets,
                        "E_" + std::to_string(n) + "(" + r->name() + ")");
}

/// Right cosets x N of a normal subgroup N, found by walking the Cayley graph of
/// the ambient generators; rep[0] is the identity.
struct CosetSpace {
  std::shared_ptr<const MatrixGroup> normal;
  std::vector<RMatrix> reps;
  std::vector<RMatrix> rep_inverses;
  std::vector<RMatrix> generators;                 ///< ambient generators
  std::vector<std::vector<std::size_t>> step;      ///< step[c][s] = coset of rep_c * gen_s

  std::size_t size() const noexcept { return reps.size(); }

  /// Coset index of g, or npos if g lies outside every known coset.
  std::size_t find(const RMatrix& g) const {
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (normal->contains(g * rep_inverses[c])) return c;
    return npos;
  }
  std::size_t coset_of(const RMatrix& g) const {
    const std::size_t c = find(g);
    if (c == npos) throw BadInput("matrix " + g.str() + " lies outside the enumerated group");
    return c;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline CosetSpace enumerate_cosets(std::shared_ptr<const MatrixGroup> normal, const std::vector<RMatrix>& generators) {
  CosetSpace cs;
  cs.normal = std::move(normal);
  cs.generators = generators;
  const auto& r = cs.normal->ring;
  cs.reps.push_back(RMatrix::identity(r, cs.normal->n));
  cs.rep_inverses.push_back(cs.reps.back());
  for (std::size_t c = 0; c < cs.reps.size(); ++c) {
    std::vector<std::size_t> row;
    for (const auto& s : generators) {
      RMatrix y = cs.reps[c] * s;
      std::size_t d = cs.find(y);
      if (d == CosetSpace::npos) {
        d = cs.reps.size();
        cs.rep_inverses.push_back(inverse_or_throw(y));
        cs.reps.push_back(std::move(y));
      }
      row.push_back(d);
    }
    cs.step.push_back(std::move(row));
  }
  return cs;
}

/// Abelianization of the finite quotient group G/N from its Cayley graph:
/// generators are cosets, relations [c] + [s] - [c s] for every coset c and
/// ambient generator s.
inline PresentedAbelianGroup abelianize_cosets(const CosetSpace& cs) {
  const std::size_t k = cs.size();
  IntMatrix rel(0, k);
  std::vector<std::size_t> gen_coset;
  for (const auto& s : cs.generators) gen_coset.push_back(cs.coset_of(s));
  {
    std::vector<BigInt> row(k);
    row[0] = 1;  // identity coset
    rel.append_row(row);
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t s = 0; s < cs.generators.size(); ++s) {
      std::vector<BigInt> row(k);
      row[c] += 1;
      row[gen_coset[s]] += 1;
      row[cs.step[c][s]] -= 1;
      rel.append_row(row);
    }
  return group_from_presentation(k, rel);
}

/// Whether the quotient group G/N is abelian (checks rep products pairwise).
inline bool quotient_is_abelian(const CosetSpace& cs) {
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b)
      if (cs.coset_of(cs.reps[a] * cs.reps[b]) != cs.coset_of(cs.reps[b] * cs.reps[a])) return false;
  return true;
}

}  // namespace klow
