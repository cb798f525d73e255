#include <gtest/gtest.h>

#include <random>

#include "klow/abelian_group.hpp"
#include "klow/finite_ring.hpp"
#include "klow/int_matrix.hpp"
#include "klow/rmatrix.hpp"
#include "support/oracles.hpp"

using namespace klow;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST(FiniteRing, ZmodBasics) {
  auto z4 = rings::zmod(4);
  EXPECT_EQ(z4->order(), 4u);
  EXPECT_EQ(z4->one(), 1u);
  EXPECT_EQ(z4->char_exponent(), 4u);
  EXPECT_EQ(z4->units(), (std::vector<Elem>{1, 3}));
  EXPECT_EQ(z4->inverse(3), std::optional<Elem>(3));
}

TEST(FiniteRing, SquareZeroHasNoUnit) {
  auto sz = rings::square_zero(3);
  EXPECT_EQ(sz->order(), 3u);
  EXPECT_FALSE(sz->has_one());
  for (Elem a = 0; a < 3; ++a)
    for (Elem b = 0; b < 3; ++b) EXPECT_EQ(sz->mul(a, b), 0u);
  EXPECT_THROW(sz->one(), NotUnital);
}

TEST(FiniteRing, TriangularOverF3) {
  auto t = rings::triangular2(rings::gf(3, 1, {1, 1}));
  EXPECT_EQ(t->order(), 27u);
  EXPECT_TRUE(t->has_one());
  EXPECT_FALSE(t->is_commutative());
  EXPECT_EQ(t->units().size(), 2u * 2u * 3u);
}

TEST(FiniteRing, GfFourIsAField) {
  auto f4 = rings::gf(2, 2, {1, 1, 1});
  EXPECT_EQ(f4->units().size(), 3u);
  EXPECT_EQ(f4->char_exponent(), 2u);
}

TEST(FiniteRing, ReduciblePolynomialRejected) {
  // x^2 + 1 = (x+1)^2 over F2
  EXPECT_THROW(rings::gf(2, 2, {1, 0, 1}), NotIrreducible);
  EXPECT_THROW(rings::gf(3, 2, {2, 0, 1}), NotIrreducible);  // x^2 - 1
}

TEST(FiniteRing, NonassociativeTableRejected) {
  // Z/2 addition with a product that is not associative: 1*1 = 1 but 0*1 = 1
  std::vector<Elem> add{0, 1, 1, 0}, mul{0, 1, 1, 1};
  try {
    rings::table("bad", 2, add, mul, 0, std::nullopt);
    FAIL() << "expected AxiomViolation";
  } catch (const AxiomViolation& e) {
    EXPECT_FALSE(e.axiom().empty());
  }
}

TEST(FiniteRing, BrokenIdentityRejected) {
  std::vector<Elem> add{0, 1, 1, 0}, mul{0, 0, 0, 1};
  EXPECT_THROW(rings::table("bad", 2, add, mul, 0, Elem{0}), AxiomViolation);
}

TEST(FiniteRing, CatalogStyleConstructorsSatisfyAxioms) {
  auto f2 = rings::zmod(2), f3 = rings::zmod(3);
  std::vector<RingPtr> rs{rings::zmod(6),
                          rings::matrix_ring(f2, 2),
                          rings::dual_numbers(f3),
                          rings::direct_product(f2, f2),
                          rings::triangular2(rings::gf(2, 2, {1, 1, 1})),
                          rings::square_zero(4)};
  for (const auto& r : rs) {
    // rebuild from tables: validation is exhaustive
    EXPECT_NO_THROW(rings::table(r->name(), r->order(), r->add_table(), r->mul_table(), r->zero(), r->maybe_one()));
    for (Elem x = 0; x < r->order(); ++x) EXPECT_EQ(r->times(static_cast<long long>(r->char_exponent()), x), r->zero());
  }
}

TEST(Unitalize, SquareZeroTwoIsDualNumbers) {
  auto u = unitalize_finite(rings::square_zero(2));
  EXPECT_EQ(u.ring->order(), 4u);
  EXPECT_TRUE(u.ring->finite_truncation());
  EXPECT_TRUE(oracle::ring_isomorphism(u.ring, rings::dual_numbers(rings::zmod(2))).has_value());
  EXPECT_TRUE(u.embedding.is_ring_hom());
  EXPECT_TRUE(u.augmentation.is_ring_hom());
  EXPECT_TRUE(u.augmentation.is_unital());
}

TEST(Unitalize, SquareZeroThreeIsDualNumbers) {
  auto u = unitalize_finite(rings::square_zero(3));
  EXPECT_EQ(u.ring->order(), 9u);
  EXPECT_TRUE(oracle::ring_isomorphism(u.ring, rings::dual_numbers(rings::zmod(3))).has_value());
}

TEST(Unitalize, UnitalInputSplitsAsProduct) {
  for (std::size_t n : {2u, 3u, 4u}) {
    auto r = rings::zmod(n);
    auto u = unitalize_finite(r);
    auto prod = rings::direct_product(r, rings::zmod(r->char_exponent()));
    EXPECT_TRUE(oracle::ring_isomorphism(u.ring, prod).has_value()) << n;
    // the explicit map (a + k) -> (a + k*1, k)
    std::vector<Elem> f(u.ring->order());
    for (Elem x = 0; x < u.ring->order(); ++x) {
      Elem a = static_cast<Elem>(x % n), k = static_cast<Elem>(x / n);
      f[x] = static_cast<Elem>(r->add(a, r->integer(k)) + k * n);
    }
    EXPECT_TRUE((RingMap{u.ring, prod, f}.is_ring_hom())) << n;
  }
  auto f2xf2 = rings::direct_product(rings::zmod(2), rings::zmod(2));
  auto u = unitalize_finite(f2xf2);
  EXPECT_TRUE(oracle::ring_isomorphism(u.ring, rings::direct_product(f2xf2, rings::zmod(2))).has_value());
}

TEST(Unitalize, LargerModulusAllowed) {
  auto u = unitalize_finite(rings::square_zero(2), 4);
  EXPECT_EQ(u.ring->order(), 8u);
  EXPECT_THROW(unitalize_finite(rings::square_zero(2), 3), BadInput);
}

TEST(RMatrix, InverseExamples) {
  auto z4 = rings::zmod(4);
  EXPECT_EQ(inverse(RMatrix::identity(z4, 2)), RMatrix::identity(z4, 2));
  EXPECT_FALSE(inverse(RMatrix(z4, 2, {2, 0, 0, 1})).has_value());
  auto h = inverse(RMatrix(z4, 2, {1, 1, 0, 1}));
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(*h, RMatrix(z4, 2, {1, 3, 0, 1}));
  EXPECT_THROW(inverse(RMatrix(rings::square_zero(2), 1)), NotUnital);
}

TEST(RMatrix, InvertibilityAgreesWithSearchOracle) {
  std::vector<RingPtr> rs{rings::zmod(2), rings::zmod(3), rings::zmod(4), rings::gf(2, 2, {1, 1, 1}),
                          rings::direct_product(rings::zmod(2), rings::zmod(2)), rings::dual_numbers(rings::zmod(2))};
  for (const auto& r : rs) {
    std::size_t invertible = 0;
    oracle::for_each_matrix(r, 2, [&](const RMatrix& g) {
      auto a = inverse(g);
      auto b = oracle::inverse_by_search(g);
      ASSERT_EQ(a.has_value(), b.has_value()) << r->name() << " " << g.str();
      if (a) {
        EXPECT_EQ(*a, *b);
        ++invertible;
      }
    });
    if (r->name() == "F4") EXPECT_EQ(invertible, 180u);
    if (r->name() == "Z4") EXPECT_EQ(invertible, 96u);
  }
}

TEST(RMatrix, CodecOrderIsLexicographic) {
  auto z3 = rings::zmod(3);
  MatrixCodec c(z3, 2);
  EXPECT_EQ(c.key_space(), 81u);
  std::vector<RMatrix> ms;
  for (std::uint64_t k = 0; k < 81; ++k) {
    ms.push_back(c.decode(k));
    EXPECT_EQ(c.encode(ms.back()), k);
  }
  EXPECT_TRUE(std::is_sorted(ms.begin(), ms.end()));
}

TEST(Smith, SpecExamples) {
  auto s = smith_normal_form(IntMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(s.diagonal, (std::vector<BigInt>{1, 6}));
  auto z = smith_normal_form(IntMatrix(1, 1));
  EXPECT_EQ(z.rank, 0u);
  auto id = smith_normal_form(IntMatrix::identity(3));
  EXPECT_EQ(id.diagonal, (std::vector<BigInt>{1, 1, 1}));
}

TEST(Smith, RandomAgreesWithDeterminantalDivisors) {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> dim(1, 4);
    const std::size_t r = dim(rng), c = dim(rng);
    IntMatrix m = random_matrix(rng, r, c, -6, 6);
    if (trial % 5 == 0) m = m * IntMatrix(m.cols(), m.cols()) ;  // zero matrix, rank 0
    if (trial % 7 == 1 && r > 1) for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    SmithForm s = smith_normal_form(m);
    // certificate
    IntMatrix d = s.left * m * s.right;
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) {
        const BigInt want = (i == j && i < s.diagonal.size()) ? s.diagonal[i] : BigInt(0);
        ASSERT_EQ(d(i, j), want) << m.str();
      }
    EXPECT_EQ(abs(determinant(s.left)), 1);
    EXPECT_EQ(abs(determinant(s.right)), 1);
    EXPECT_EQ(s.right * s.right_inverse, IntMatrix::identity(c));
    for (std::size_t i = 0; i + 1 < s.rank; ++i) EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
    auto want = oracle::invariant_factors(m);
    for (std::size_t i = 0; i < want.size(); ++i) {
      const BigInt got = i < s.diagonal.size() ? s.diagonal[i] : BigInt(0);
      EXPECT_EQ(got, want[i]) << m.str();
    }
  }
}

TEST(Presentation, SpecExamples) {
  auto z = group_from_presentation(1, IntMatrix(0, 1));
  EXPECT_EQ(z.free_rank, 1u);
  EXPECT_TRUE(z.torsion.empty());
  auto z2 = group_from_presentation(1, IntMatrix{{2}});
  EXPECT_EQ(z2.torsion, (std::vector<BigInt>{2}));
  auto z1 = group_from_presentation(2, IntMatrix{{1, -1}});
  EXPECT_EQ(z1.free_rank, 1u);
  EXPECT_TRUE(z1.torsion.empty());
  EXPECT_EQ(z1.describe(), "Z");
  auto k = group_from_presentation(3, IntMatrix{{2, 0, 0}, {0, 3, 0}});
  EXPECT_EQ(k.describe(), "Z + Z/6");
}

TEST(Presentation, GeneratorImagesRespectRelations) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> dim(1, 4);
    const std::size_t gens = dim(rng), rels = dim(rng);
    IntMatrix rel = random_matrix(rng, rels, gens, -4, 4);
    auto g = group_from_presentation(gens, rel);
    for (std::size_t r = 0; r < rels; ++r) {
      IntVector v = g.zero();
      for (std::size_t i = 0; i < gens; ++i) v = add_vectors(v, scale_vector(g.generator(i), rel(r, i)));
      EXPECT_TRUE(g.is_zero(v));
    }
    // basis preimages map back onto the basis
    for (std::size_t j = 0; j < g.num_coords(); ++j) {
      IntVector v = g.zero();
      for (std::size_t i = 0; i < gens; ++i) v = add_vectors(v, scale_vector(g.generator(i), g.basis_preimages(j, i)));
      IntVector e = g.zero();
      e[j] = 1;
      EXPECT_TRUE(g.is_zero(add_vectors(v, scale_vector(e, -1))));
    }
  }
}

TEST(Presentation, KernelAndImageOfMultiplication) {
  // Z/6 --x2--> Z/6: image of order 3, kernel of order 2
  auto z6 = group_from_presentation(1, IntMatrix{{6}});
  auto h = hom_from_generator_images(z6, z6, {scale_vector(z6.generator(0), 2)});
  EXPECT_EQ(*image(h).order(), 3);
  EXPECT_EQ(*kernel(h).order(), 2);
  EXPECT_FALSE(is_injective(h));
  // Z -> Z/2 surjective with infinite kernel
  auto z = group_from_presentation(1, IntMatrix(0, 1));
  auto z2 = group_from_presentation(1, IntMatrix{{2}});
  auto q = hom_from_generator_images(z, z2, {z2.generator(0)});
  EXPECT_TRUE(is_surjective(q));
  EXPECT_EQ(kernel(q).group.free_rank, 1u);
  // ill-defined assignment rejected
  EXPECT_THROW(hom_from_generator_images(z2, z, {z.generator(0)}), BadInput);
}
