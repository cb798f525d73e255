#include <gtest/gtest.h>

#include <random>
#include <set>

#include "klow/cone.hpp"
#include "klow/toeplitz.hpp"

using namespace klow;

namespace {

RingPtr f2() { return rings::zmod(2, "F2"); }
RingPtr f3() { return rings::zmod(3, "F3"); }
RingPtr z4() { return rings::zmod(4); }

// dense windows straight from the generator formulas, 1-based (p, q)
RMatrix dense(const RingPtr& r, std::size_t n, const std::function<bool(std::size_t, std::size_t)>& one_at) {
  RMatrix m(r, n);
  for (std::size_t p = 1; p <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q)
      if (one_at(p, q)) m(p - 1, q - 1) = r->one();
  return m;
}
RMatrix dense_alpha0(const RingPtr& r, std::size_t n) { return dense(r, n, [](auto p, auto q) { return q == 2 * p; }); }
RMatrix dense_beta0(const RingPtr& r, std::size_t n) { return dense(r, n, [](auto p, auto q) { return p == 2 * q; }); }
RMatrix dense_alpha1(const RingPtr& r, std::size_t n) { return dense(r, n, [](auto p, auto q) { return q + 1 == 2 * p; }); }
RMatrix dense_beta1(const RingPtr& r, std::size_t n) { return dense(r, n, [](auto p, auto q) { return p + 1 == 2 * q; }); }

RMatrix corner(const RMatrix& m, std::size_t n) {
  RMatrix out(m.ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
  return out;
}

LazyMatrix random_finite(const RingPtr& r, std::mt19937& rng, Index extent, std::size_t terms) {
  std::map<std::pair<Index, Index>, Elem> e;
  for (std::size_t t = 0; t < terms; ++t) e[{1 + rng() % extent, 1 + rng() % extent}] = static_cast<Elem>(rng() % r->order());
  return LazyMatrix::finite(r, e);
}

}  // namespace

TEST(Window, Examples) {
  auto r = f2();
  EXPECT_EQ(window_eval(LazyMatrix::identity(r), 3), RMatrix::identity(r, 3));
  RMatrix a0 = window_eval(LazyMatrix::alpha0(r), 4);
  RMatrix want(r, 4);
  want(0, 1) = 1;
  want(1, 3) = 1;
  EXPECT_EQ(a0, want);
  // beta_0 alpha_0 projects onto the even coordinates
  RMatrix ba = window_eval(LazyMatrix::beta0(r) * LazyMatrix::alpha0(r), 10);
  for (std::size_t p = 1; p <= 10; ++p)
    for (std::size_t q = 1; q <= 10; ++q) EXPECT_EQ(ba(p - 1, q - 1), (p == q && p % 2 == 0) ? 1u : 0u);
}

TEST(Window, GeneratorsAgreeWithDenseFormulas) {
  for (const auto& r : {f2(), z4()}) {
    EXPECT_EQ(window_eval(LazyMatrix::alpha0(r), 20), dense_alpha0(r, 20));
    EXPECT_EQ(window_eval(LazyMatrix::beta0(r), 20), dense_beta0(r, 20));
    EXPECT_EQ(window_eval(LazyMatrix::alpha1(r), 20), dense_alpha1(r, 20));
    EXPECT_EQ(window_eval(LazyMatrix::beta1(r), 20), dense_beta1(r, 20));
  }
}

TEST(Window, LazyProductsMatchDenseProductsOnLargeWindow) {
  // a dense window of size 4N is exact on the N corner for words of
  // index growth at most 4
  auto r = z4();
  const std::size_t n = 16, big = 64;
  const RMatrix a0 = dense_alpha0(r, big), b0 = dense_beta0(r, big), a1 = dense_alpha1(r, big), b1 = dense_beta1(r, big);
  const auto la0 = LazyMatrix::alpha0(r), lb0 = LazyMatrix::beta0(r), la1 = LazyMatrix::alpha1(r), lb1 = LazyMatrix::beta1(r);
  EXPECT_EQ(window_eval(lb0 * la0 + lb1 * la1, n), corner(b0 * a0 + b1 * a1, n));
  EXPECT_EQ(window_eval(la0 * la1 * lb1 * lb0, n), corner(a0 * a1 * b1 * b0, n));
  EXPECT_EQ(window_eval(la1 * lb0, n), corner(a1 * b0, n));
}

TEST(SumRing, IdentitiesHoldOn64Windows) {
  for (const auto& r : {f2(), z4()}) {
    auto checks = sum_ring_identities(r, 64);
    EXPECT_EQ(checks.size(), 6u);
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << r->name() << ": " << c.identity << " " << c.witness;
  }
  EXPECT_THROW(sum_ring_identities(f2(), 3), BadInput);
}

TEST(SumRing, FalseIdentityReportsWitness) {
  auto r = f2();
  auto diff = window_difference(LazyMatrix::alpha0(r) * LazyMatrix::beta1(r), LazyMatrix::identity(r), 8);
  ASSERT_TRUE(diff.has_value());
  EXPECT_EQ(*diff, "(1,1): 0 != 1");
}

TEST(BoxPlus, Examples) {
  auto r = f2();
  auto e11 = LazyMatrix::unit(r, 1, 1);
  auto s = box_plus(e11, e11);
  RMatrix want(r, 8);
  want(0, 0) = 1;
  want(1, 1) = 1;
  EXPECT_EQ(window_eval(s, 8), want);
  EXPECT_TRUE(window_eval(box_plus(LazyMatrix::zero(r), LazyMatrix::zero(r)), 8).is_zero());
  EXPECT_EQ(window_eval(box_plus(LazyMatrix::identity(r), LazyMatrix::identity(r)), 64), RMatrix::identity(r, 64));
}

TEST(BoxPlus, AlternativeDecompositionsAreConjugate) {
  std::mt19937 rng(31);
  const auto eo = even_odd_decomposition(), m3 = mod3_decomposition();
  // the mod-3 bijections are bijections onto the complementary pieces
  std::set<Index> seen;
  for (Index n = 1; n <= 300; ++n) {
    EXPECT_EQ(m3.inv0(m3.psi0(n)), std::optional<Index>(n));
    EXPECT_EQ(m3.inv1(m3.psi1(n)), std::optional<Index>(n));
    EXPECT_FALSE(m3.inv1(m3.psi0(n)).has_value());
    EXPECT_TRUE(seen.insert(m3.psi0(n)).second);
    EXPECT_TRUE(seen.insert(m3.psi1(n)).second);
  }
  for (Index m = 1; m <= 300; ++m) EXPECT_TRUE(seen.count(m));
  for (const auto& r : {f2(), z4()}) {
    const auto p = decomposition_permutation(r, eo, m3);
    EXPECT_EQ(window_eval(p * transpose(p), 64), RMatrix::identity(r, 64));
    for (int t = 0; t < 20; ++t) {
      auto a = random_finite(r, rng, 5, 4), b = random_finite(r, rng, 5, 4);
      auto x = box_plus(a, b, eo), y = box_plus(a, b, m3);
      EXPECT_FALSE(window_difference(p * x * transpose(p), y, 64).has_value());
      for (Index i = 1; i <= 30; ++i)
        for (Index j = 1; j <= 30; ++j) EXPECT_EQ(x.entry(i, j), y.entry(eo.to(m3, i), eo.to(m3, j)));
    }
  }
}

TEST(PhiInfinity, E11Positions) {
  auto r = f2();
  auto w = window_eval(phi_infinity(LazyMatrix::unit(r, 1, 1)), 64);
  std::vector<std::size_t> diag;
  for (std::size_t p = 0; p < 64; ++p)
    for (std::size_t q = 0; q < 64; ++q)
      if (w(p, q) != 0) {
        EXPECT_EQ(p, q);
        diag.push_back(p + 1);
      }
  EXPECT_EQ(diag, (std::vector<std::size_t>{2, 3, 5, 9, 17, 33}));
  EXPECT_TRUE(window_eval(phi_infinity(LazyMatrix::zero(r)), 16).is_zero());
  EXPECT_THROW(phi_infinity(LazyMatrix::alpha0(r)), NotFiniteSupport);
}

TEST(PhiInfinity, ClosedFormMatchesOperatorSeries) {
  // sum_{k <= K} beta_1^k beta_0 a alpha_0 alpha_1^k on dense windows; terms
  // with k > log2 N vanish on the N-window
  auto r = z4();
  std::mt19937 rng(8);
  const std::size_t n = 32, big = 256;
  const RMatrix a0 = dense_alpha0(r, big), b0 = dense_beta0(r, big), a1 = dense_alpha1(r, big), b1 = dense_beta1(r, big);
  for (int t = 0; t < 5; ++t) {
    auto a = random_finite(r, rng, 3, 3);
    RMatrix fa(r, big);
    const auto entries = a.finite_entries();
    for (const auto& [pq, v] : *entries) fa(pq.first - 1, pq.second - 1) = v;
    RMatrix sum(r, big), left = b0, right = a0;
    for (int k = 0; k <= 6; ++k) {
      sum = sum + left * fa * right;
      left = b1 * left;
      right = right * a1;
    }
    EXPECT_EQ(window_eval(phi_infinity(a), n), corner(sum, n)) << a.describe();
  }
}

TEST(PhiInfinity, AbsorbsUnderBoxPlus) {
  for (const auto& r : {f2(), z4()})
    for (const auto& a : {LazyMatrix::unit(r, 1, 1), LazyMatrix::unit(r, 1, 2)}) {
      auto inf = phi_infinity(a);
      EXPECT_FALSE(window_difference(box_plus(a, inf), inf, 64).has_value()) << r->name() << " " << a.describe();
    }
}

TEST(Gamma, Membership) {
  auto r = z4();
  EXPECT_EQ(LazyMatrix::alpha0(r).gamma_membership(), GammaVerdict::gamma);
  auto inf = phi_infinity(LazyMatrix::unit(r, 1, 1));
  EXPECT_EQ(inf.gamma_membership(), GammaVerdict::gamma);
  EXPECT_EQ(*inf.certificate().values, (std::set<Elem>{0, 1}));
  EXPECT_EQ(*inf.certificate().row_bound, 1u);
  EXPECT_EQ(LazyMatrix::unit(r, 3, 2).gamma_membership(), GammaVerdict::gamma);
  auto prod = LazyMatrix::alpha0(r) * inf * LazyMatrix::beta1(r) + LazyMatrix::identity(r);
  EXPECT_EQ(prod.gamma_membership(), GammaVerdict::gamma);

  // blocks of ones of growing size: finite rows and columns, no uniform bound
  auto block_of = [](Index p) {
    Index k = 1;
    while (k * (k + 1) / 2 < p) ++k;
    return k;
  };
  auto line = [block_of](Index p) {
    const Index k = block_of(p), lo = k * (k - 1) / 2 + 1;
    SparseVec v;
    for (Index j = lo; j < lo + k; ++j) v.push_back({j, 1});
    return v;
  };
  GammaCertificate cert;
  cert.rows_finite = cert.cols_finite = true;
  auto blocks = LazyMatrix::custom(
      r, "growing_blocks", [block_of](Index p, Index q) -> Elem { return block_of(p) == block_of(q) ? 1 : 0; }, line, line,
      cert);
  EXPECT_EQ(blocks.gamma_membership(), GammaVerdict::gamma_ell);
  EXPECT_EQ((blocks * LazyMatrix::alpha0(r)).gamma_membership(), GammaVerdict::gamma_ell);
  EXPECT_FALSE(window_difference(blocks, LazyMatrix::custom(r, "entry_only", [block_of](Index p, Index q) -> Elem {
                                   return block_of(p) == block_of(q) ? 1 : 0;
                                 }),
                                 20)
                   .has_value());
  auto opaque = LazyMatrix::custom(r, "opaque", [](Index, Index) -> Elem { return 1; });
  EXPECT_EQ(opaque.gamma_membership(), GammaVerdict::unknown);
  EXPECT_THROW(window_eval(opaque * LazyMatrix::identity(r), 4), NotFiniteSupport);
}

TEST(Gamma, ProductsOfGammaStayGamma) {
  std::mt19937 rng(5);
  auto r = f2();
  std::vector<LazyMatrix> pool{LazyMatrix::alpha0(r), LazyMatrix::beta0(r), LazyMatrix::alpha1(r), LazyMatrix::beta1(r),
                               phi_infinity(LazyMatrix::unit(r, 1, 2)), random_finite(r, rng, 4, 3)};
  for (int t = 0; t < 50; ++t) {
    auto x = pool[rng() % pool.size()] * pool[rng() % pool.size()] + pool[rng() % pool.size()];
    EXPECT_EQ(x.gamma_membership(), GammaVerdict::gamma) << x.describe();
  }
}

TEST(Supports, ProbeAcceptsSoundAndRejectsUnsound) {
  std::mt19937 rng(77);
  auto r = z4();
  auto x = LazyMatrix::alpha0(r) * phi_infinity(LazyMatrix::unit(r, 2, 1)) * LazyMatrix::beta1(r);
  EXPECT_FALSE(probe_supports(x, 1000, 256, rng).has_value());
  // column function that forgets every entry
  GammaCertificate cert{true, true, 1, 1, std::set<Elem>{0, 1}};
  auto liar = LazyMatrix::custom(
      r, "liar", [](Index p, Index q) -> Elem { return p == q ? 1 : 0; }, [](Index p) { return SparseVec{{p, 1}}; },
      [](Index) { return SparseVec{}; }, cert);
  EXPECT_TRUE(probe_supports(liar, 50, 100, rng).has_value());
}

TEST(Supports, CertifiedProductWindow) {
  auto r = f2();
  // alpha_0 row p reaches column 2p, so only rows <= 4 of an 8-window are safe
  EXPECT_EQ(certified_product_window(LazyMatrix::alpha0(r), LazyMatrix::beta0(r), 8), 4u);
  EXPECT_EQ(certified_product_window(LazyMatrix::identity(r), LazyMatrix::identity(r), 8), 8u);
}

TEST(ConeChecks, AllPassOverF2AndZ4) {
  for (const auto& r : {f2(), z4()})
    for (const auto& c : cone_checks(r, 64)) EXPECT_TRUE(c.pass) << r->name() << ": " << c.identity << " " << c.witness;
}

TEST(Toeplitz, Examples) {
  auto r = z4();
  EXPECT_EQ(ToeplitzElement::alpha(r) * ToeplitzElement::alpha_star(r), ToeplitzElement::one(r));
  auto y = ToeplitzElement::alpha_star(r) * ToeplitzElement::alpha(r);
  EXPECT_EQ(y, ToeplitzElement::monomial(r, 1, 1));
  EXPECT_NE(y, ToeplitzElement::one(r));
  EXPECT_EQ(normal_form(r, {1, {true, false}}), ToeplitzElement::one(r));
  EXPECT_EQ(normal_form(r, {1, {false, true}}), y);
  EXPECT_TRUE((ToeplitzElement::one(r) - ToeplitzElement::one(r)).is_zero());
}

TEST(Toeplitz, MatrixUnits) {
  for (const auto& r : {f3(), z4()}) {
    auto c = matrix_unit_check(r, 6);
    EXPECT_TRUE(c.pass) << c.witness;
  }
  auto r = f3();
  EXPECT_EQ(ToeplitzElement::matrix_unit(r, 1, 1), ToeplitzElement::one(r) - ToeplitzElement::alpha_star(r) * ToeplitzElement::alpha(r));
}

TEST(Toeplitz, MultiplicationAssociativeAndMatchesWords) {
  std::mt19937 rng(4);
  auto r = z4();
  for (int t = 0; t < 200; ++t) {
    auto a = random_toeplitz(r, rng, 4, 3), b = random_toeplitz(r, rng, 4, 3), c = random_toeplitz(r, rng, 4, 3);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
  // word concatenation then rewriting agrees with the product formula
  for (int t = 0; t < 200; ++t) {
    ToeplitzWord u{1, {}}, v{1, {}};
    for (int i = 0; i < 5; ++i) u.letters.push_back(rng() % 2);
    for (int i = 0; i < 5; ++i) v.letters.push_back(rng() % 2);
    ToeplitzWord uv{1, u.letters};
    uv.letters.insert(uv.letters.end(), v.letters.begin(), v.letters.end());
    EXPECT_EQ(normal_form(r, uv), normal_form(r, u) * normal_form(r, v));
  }
}

TEST(Toeplitz, EmbeddingAgreesWithBandOracle) {
  auto r = f3();
  // the band oracle written out independently: entry (i,j) = sum c_pq [i-p = j-q >= 1]
  std::mt19937 rng(12);
  for (int t = 0; t < 50; ++t) {
    auto x = random_toeplitz(r, rng, 5, 4);
    RMatrix want(r, 16);
    for (std::size_t i = 1; i <= 16; ++i)
      for (std::size_t j = 1; j <= 16; ++j)
        for (const auto& [pq, c] : x.support)
          if (i > pq.first && j > pq.second && i - pq.first == j - pq.second) want(i - 1, j - 1) = r->add(want(i - 1, j - 1), c);
    EXPECT_EQ(window_eval(embed_toeplitz(x), 16), want);
  }
  EXPECT_EQ(window_eval(embed_toeplitz(ToeplitzElement::one(r)), 16), RMatrix::identity(r, 16));
  RMatrix e11(r, 16);
  e11(0, 0) = 1;
  EXPECT_EQ(window_eval(embed_toeplitz(ToeplitzElement::matrix_unit(r, 1, 1)), 16), e11);
}

TEST(Toeplitz, QInvolution) {
  for (const auto& r : {f3(), z4()}) {
    auto checks = q_involution_check(r);
    ASSERT_EQ(checks.size(), 2u);
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << r->name() << ": " << c.identity << " " << c.witness;
  }
  EXPECT_THROW(q_involution_check(rings::square_zero(2)), NotUnital);
}

TEST(Toeplitz, AllChecksPass) {
  for (const auto& r : {f3(), z4()})
    for (const auto& c : toeplitz_checks(r)) EXPECT_TRUE(c.pass) << r->name() << ": " << c.identity << " " << c.witness;
}
