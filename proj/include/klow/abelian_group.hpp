#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "klow/error.hpp"
#include "klow/int_matrix.hpp"

namespace klow {

using IntVector = std::vector<BigInt>;

/// Finitely generated abelian group in invariant-factor form
/// Z/d_1 + ... + Z/d_s + Z^free_rank, together with the images of the
/// generators of the presentation it was built from.
///
/// Coordinates: the s torsion coordinates come first (reduced into
/// [0, d_i)), then the free coordinates.
struct PresentedAbelianGroup {
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;  ///< d_1 | d_2 | ..., each >= 2
  IntMatrix generator_images;   ///< generators x coords
  IntMatrix basis_preimages;    ///< coords x generators: basis vector j as a combination of generators

  std::size_t num_coords() const noexcept { return torsion.size() + free_rank; }
  std::size_t num_generators() const noexcept { return generator_images.rows(); }

  bool same_group(const PresentedAbelianGroup& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }

  bool trivial() const { return free_rank == 0 && torsion.empty(); }

  /// Order of the group; empty when infinite.
  std::optional<BigInt> order() const {
    if (free_rank > 0) return std::nullopt;
    BigInt n = 1;
    for (const auto& d : torsion) n *= d;
    return n;
  }

  IntVector reduce(IntVector v) const {
    for (std::size_t i = 0; i < torsion.size(); ++i) mpz_fdiv_r(v[i].get_mpz_t(), v[i].get_mpz_t(), torsion[i].get_mpz_t());
    return v;
  }

  bool is_zero(const IntVector& v) const {
    IntVector r = reduce(v);
    for (const auto& x : r)
      if (x != 0) return false;
    return true;
  }

  IntVector generator(std::size_t i) const { return generator_images.row(i); }

  IntVector zero() const { return IntVector(num_coords()); }

  /// Human-readable invariant-factor description, e.g. "Z^2 + Z/2".
  std::string describe() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
      os << "Z";
      if (free_rank > 1) os << "^" << free_rank;
      first = false;
    }
    for (const auto& d : torsion) {
      os << (first ? "" : " + ") << "Z/" << d.get_str();
      first = false;
    }
    return os.str();
  }
};

inline IntVector add_vectors(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline IntVector scale_vector(const IntVector& a, const BigInt& k) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * k;
  return out;
}

/// Cokernel of the relation matrix (one relation per row, `gens` columns).
inline PresentedAbelianGroup group_from_presentation(std::size_t gens, const IntMatrix& relations) {
  if (relations.rows() > 0 && relations.cols() != gens)
    throw BadInput("relation matrix has " + std::to_string(relations.cols()) + " columns, expected " +
                   std::to_string(gens));
  PresentedAbelianGroup g;
  IntMatrix c = relations.rows() == 0 ? IntMatrix(0, gens) : row_compress(relations);
  IntMatrix right = IntMatrix::identity(gens), right_inv = IntMatrix::identity(gens);
  std::vector<BigInt> diag(gens);  // 0 for free coordinates
  if (c.rows() > 0) {
    SmithForm s = smith_normal_form(c, false);
    right = s.right;
    right_inv = s.right_inverse;
    for (std::size_t j = 0; j < s.rank; ++j) diag[j] = s.diagonal[j];
  }
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < gens; ++j)
    if (diag[j] != 0 && diag[j] != 1) {
      kept.push_back(j);
      g.torsion.push_back(diag[j]);
    }
  for (std::size_t j = 0; j < gens; ++j)
    if (diag[j] == 0) {
      kept.push_back(j);
      ++g.free_rank;
    }
  g.generator_images = IntMatrix(gens, kept.size());
  g.basis_preimages = IntMatrix(kept.size(), gens);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t j = kept[k];
    for (std::size_t i = 0; i < gens; ++i) {
      // x -> x * right carries the relation lattice onto the diagonal one
      BigInt v = right(i, j);
      if (diag[j] != 0) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), diag[j].get_mpz_t());
      g.generator_images(i, k) = v;
      g.basis_preimages(k, i) = right_inv(j, i);
    }
  }
  return g;
}

/// Torsion coordinates' moduli as the columns of a lattice in coordinate space.
inline IntMatrix relation_lattice(const PresentedAbelianGroup& g) {
  IntMatrix d(g.num_coords(), g.torsion.size());
  for (std::size_t i = 0; i < g.torsion.size(); ++i) d(i, i) = g.torsion[i];
  return d;
}

/// Subgroup of `ambient` generated by the given coordinate vectors.
struct Subgroup {
  PresentedAbelianGroup ambient;
  IntMatrix generators;         ///< coords x k, columns in ambient coordinates
  PresentedAbelianGroup group;  ///< the subgroup as an abstract group on the k generators

  /// [generators | torsion moduli]
  IntMatrix spanning_matrix() const {
    IntMatrix d = relation_lattice(ambient);
    IntMatrix m(ambient.num_coords(), generators.cols() + d.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < generators.cols(); ++c) m(r, c) = generators(r, c);
      for (std::size_t c = 0; c < d.cols(); ++c) m(r, generators.cols() + c) = d(r, c);
    }
    return m;
  }

  bool contains(const IntVector& w) const {
    if (ambient.num_coords() == 0) return true;
    if (spanning_matrix().cols() == 0) return ambient.is_zero(w);
    return integer_solve(spanning_matrix(), w).has_value();
  }

  /// Coordinates of an element of the subgroup in `group`'s normalized basis.
  IntVector coords_of(const IntVector& w) const {
    if (generators.cols() == 0 || ambient.num_coords() == 0) {
      if (!ambient.is_zero(w)) throw BadInput("element not in subgroup");
      return group.zero();
    }
    auto sol = integer_solve(spanning_matrix(), w);
    if (!sol) throw BadInput("element not in subgroup");
    IntVector out = group.zero();
    for (std::size_t i = 0; i < generators.cols(); ++i)
      out = add_vectors(out, scale_vector(group.generator(i), (*sol)[i]));
    return group.reduce(out);
  }

  /// Ambient coordinates of a subgroup element given in `group`'s coordinates.
  IntVector ambient_of(const IntVector& coords) const {
    IntVector out = ambient.zero();
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (coords[j] == 0) continue;
      for (std::size_t i = 0; i < generators.cols(); ++i) {
        const BigInt& k = group.basis_preimages(j, i);
        if (k == 0) continue;
        for (std::size_t r = 0; r < out.size(); ++r) out[r] += coords[j] * k * generators(r, i);
      }
    }
    return ambient.reduce(out);
  }

  std::optional<BigInt> order() const { return group.order(); }
};

inline Subgroup subgroup_generated(const PresentedAbelianGroup& ambient, const std::vector<IntVector>& vectors) {
  Subgroup s;
  s.ambient = ambient;
  s.generators = IntMatrix(ambient.num_coords(), vectors.size());
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    IntVector v = ambient.reduce(vectors[c]);
    for (std::size_t r = 0; r < v.size(); ++r) s.generators(r, c) = v[r];
  }
  const std::size_t k = vectors.size();
  IntMatrix m = s.spanning_matrix();
  IntMatrix rel(0, k);
  if (m.cols() > 0 && m.rows() > 0) {
    IntMatrix ker = integer_kernel(m);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      std::vector<BigInt> row(k);
      bool nonzero = false;
      for (std::size_t i = 0; i < k; ++i) {
        row[i] = ker(i, c);
        nonzero = nonzero || row[i] != 0;
      }
      if (nonzero) rel.append_row(row);
    }
  } else if (m.rows() == 0) {
    // trivial ambient group: every generator is zero
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<BigInt> row(k);
      row[i] = 1;
      rel.append_row(row);
    }
  }
  if (rel.rows() == 0) rel = IntMatrix(0, k);
  s.group = group_from_presentation(k, rel);
  return s;
}

inline bool subgroups_equal(const Subgroup& a, const Subgroup& b) {
  for (std::size_t c = 0; c < a.generators.cols(); ++c)
    if (!b.contains(a.generators.col(c))) return false;
  for (std::size_t c = 0; c < b.generators.cols(); ++c)
    if (!a.contains(b.generators.col(c))) return false;
  return true;
}

/// Homomorphism between presented groups, as a matrix target_coords x source_coords.
struct GroupHom {
  PresentedAbelianGroup source;
  PresentedAbelianGroup target;
  IntMatrix matrix;

  IntVector apply(const IntVector& x) const {
    IntVector out = target.zero();
    for (std::size_t r = 0; r < matrix.rows(); ++r)
      for (std::size_t c = 0; c < matrix.cols(); ++c) out[r] += matrix(r, c) * x[c];
    return target.reduce(out);
  }
};

/// Builds the homomorphism sending presentation generator i of `source` to
/// `images[i]` (target coordinates). Throws if that assignment does not
/// respect the relations of `source`.
inline GroupHom hom_from_generator_images(const PresentedAbelianGroup& source, const PresentedAbelianGroup& target,
                                          const std::vector<IntVector>& images) {
  if (images.size() != source.num_generators()) throw BadInput("hom: wrong number of generator images");
  GroupHom h{source, target, IntMatrix(target.num_coords(), source.num_coords())};
  for (std::size_t j = 0; j < source.num_coords(); ++j) {
    IntVector col = target.zero();
    for (std::size_t i = 0; i < images.size(); ++i) {
      const BigInt& k = source.basis_preimages(j, i);
      if (k != 0) col = add_vectors(col, scale_vector(images[i], k));
    }
    col = target.reduce(col);
    for (std::size_t r = 0; r < col.size(); ++r) h.matrix(r, j) = col[r];
  }
  for (std::size_t j = 0; j < source.torsion.size(); ++j) {
    IntVector col = target.zero();
    for (std::size_t r = 0; r < col.size(); ++r) col[r] = h.matrix(r, j) * source.torsion[j];
    if (!target.is_zero(col)) throw BadInput("hom: generator images do not respect the relations of the source");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    IntVector via = h.apply(source.generator(i));
    if (!target.is_zero(add_vectors(via, scale_vector(images[i], -1))))
      throw BadInput("hom: generator images do not respect the relations of the source");
  }
  return h;
}

inline Subgroup image(const GroupHom& h) {
  std::vector<IntVector> cols;
  for (std::size_t c = 0; c < h.matrix.cols(); ++c) cols.push_back(h.matrix.col(c));
  return subgroup_generated(h.target, cols);
}

inline Subgroup kernel(const GroupHom& h) {
  const auto& src = h.source;
  const auto& tgt = h.target;
  const std::size_t q = src.num_coords();
  IntMatrix d = relation_lattice(tgt);
  IntMatrix m(tgt.num_coords(), q + d.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < q; ++c) m(r, c) = h.matrix(r, c);
    for (std::size_t c = 0; c < d.cols(); ++c) m(r, q + c) = d(r, c);
  }
  std::vector<IntVector> vecs;
  if (m.rows() == 0) {
    for (std::size_t c = 0; c < q; ++c) {
      IntVector e(q);
      e[c] = 1;
      vecs.push_back(e);
    }
  } else {
    IntMatrix ker = integer_kernel(m);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      IntVector v(q);
      for (std::size_t i = 0; i < q; ++i) v[i] = ker(i, c);
      if (!src.is_zero(v)) vecs.push_back(v);
    }
  }
  return subgroup_generated(src, vecs);
}

inline Subgroup whole_group(const PresentedAbelianGroup& g) {
  std::vector<IntVector> basis;
  for (std::size_t c = 0; c < g.num_coords(); ++c) {
    IntVector e(g.num_coords());
    e[c] = 1;
    basis.push_back(e);
  }
  return subgroup_generated(g, basis);
}

inline bool is_injective(const GroupHom& h) { return kernel(h).group.trivial(); }
inline bool is_surjective(const GroupHom& h) { return subgroups_equal(image(h), whole_group(h.target)); }
inline bool is_isomorphism(const GroupHom& h) { return is_injective(h) && is_surjective(h); }

inline GroupHom compose(const GroupHom& second, const GroupHom& first) {
  GroupHom h{first.source, second.target, IntMatrix(second.target.num_coords(), first.source.num_coords())};
  for (std::size_t c = 0; c < first.source.num_coords(); ++c) {
    IntVector e(first.source.num_coords());
    e[c] = 1;
    IntVector v = second.apply(first.apply(e));
    for (std::size_t r = 0; r < v.size(); ++r) h.matrix(r, c) = v[r];
  }
  return h;
}

}  // namespace klow
