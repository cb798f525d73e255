#include <gtest/gtest.h>

#include <random>

#include "klow/kone.hpp"
#include "support/oracles.hpp"

using namespace klow;

namespace {

const Budgets budgets{};

RingPtr f2() { return rings::zmod(2, "F2"); }
RingPtr f3() { return rings::zmod(3, "F3"); }
RingPtr f4() { return rings::gf(2, 2, {1, 1, 1}, "F4"); }
RingPtr f5() { return rings::zmod(5, "F5"); }

}  // namespace

TEST(GL, BruteCounts) {
  EXPECT_EQ(enumerate_gl_brute(f2(), 2, budgets).size(), 6u);
  EXPECT_EQ(enumerate_gl_brute(rings::zmod(4), 2, budgets).size(), 96u);
  auto g1 = enumerate_gl_brute(rings::zmod(6), 1, budgets);
  EXPECT_EQ(g1.size(), rings::zmod(6)->units().size());
  EXPECT_EQ(enumerate_gl_brute(f3(), 2, budgets).size(), 48u);
  EXPECT_EQ(enumerate_gl_brute(f4(), 2, budgets).size(), 180u);
}

TEST(GL, BudgetEnforced) {
  Budgets tiny;
  tiny.gl_candidates = 100;
  EXPECT_THROW(enumerate_gl_brute(rings::zmod(4), 2, tiny), BudgetExceeded);
  Budgets small;
  small.closure_elements = 10;
  EXPECT_THROW(enumerate_gl(rings::zmod(4), 2, small, "generated"), BudgetExceeded);
}

TEST(GL, GeneratedMatchesBrute) {
  for (const auto& r : {f2(), f3(), rings::zmod(4), rings::zmod(6), rings::triangular2(f2()),
                        rings::direct_product(f2(), f3()), rings::dual_numbers(f2())}) {
    auto brute = enumerate_gl_brute(r, 2, budgets);
    auto gen = enumerate_gl(r, 2, budgets, "generated");
    EXPECT_EQ(brute.elements, gen.elements) << r->name();
  }
}

TEST(GL, BruteIsClosedUnderProductsAndInverses) {
  std::mt19937 rng(5);
  auto g = enumerate_gl_brute(rings::zmod(4), 2, budgets);
  for (int t = 0; t < 100; ++t) {
    RMatrix a = g.element(rng() % g.size()), b = g.element(rng() % g.size());
    EXPECT_TRUE(g.contains(a * b));
    EXPECT_TRUE(g.contains(inverse_or_throw(a)));
  }
}

TEST(Elementary, ClosureSizes) {
  EXPECT_EQ(elementary_closure(f2(), 2, budgets).size(), 6u);
  EXPECT_EQ(elementary_closure(rings::zmod(4), 2, budgets).size(), 48u);
  EXPECT_EQ(elementary_closure(f3(), 2, budgets).size(), 24u);
  EXPECT_THROW(elementary_closure(f2(), 1, budgets), BadInput);
}

TEST(Elementary, ClosureIsNormalInGL) {
  for (const auto& r : {f3(), rings::zmod(4), rings::triangular2(f2()), rings::dual_numbers(f3())}) {
    auto e = elementary_closure(r, 2, budgets);
    auto gens = gl_generators(r, 2);
    for (const auto& s : gens) {
      RMatrix si = inverse_or_throw(s);
      for (const auto& t : e.generators) EXPECT_TRUE(e.contains(s * t * si)) << r->name();
    }
  }
}

TEST(Elementary, ClosureOverFieldIsKernelOfDeterminant) {
  for (const auto& r : {f3(), f5()}) {
    auto e = elementary_closure(r, 2, budgets);
    auto gl = enumerate_gl_brute(r, 2, budgets);
    for (std::size_t i = 0; i < gl.size(); ++i) {
      RMatrix g = gl.element(i);
      Elem det = r->sub(r->mul(g(0, 0), g(1, 1)), r->mul(g(0, 1), g(1, 0)));
      EXPECT_EQ(e.contains(g), det == r->one());
    }
  }
}

TEST(K1, GoldenValues) {
  struct Case {
    RingPtr r;
    std::string want;
  };
  std::vector<Case> cases{{f2(), "0"},
                          {f3(), "Z/2"},
                          {f4(), "Z/3"},
                          {f5(), "Z/4"},
                          {rings::zmod(4), "Z/2"},
                          {rings::dual_numbers(f3()), "Z/6"},
                          {rings::matrix_ring(f2(), 2), "0"},
                          {rings::zmod(6), "Z/2"},
                          {rings::direct_product(f2(), f3()), "Z/2"}};
  for (const auto& c : cases) {
    auto rep = k1_report(c.r, {2}, budgets);
    EXPECT_EQ(rep.top().k1.describe(), c.want) << c.r->name();
    EXPECT_TRUE(rep.top().complete) << c.r->name();
  }
}

TEST(K1, StableAcrossLevelsAndAbelianAtThree) {
  for (const auto& r : {f2(), f3(), rings::zmod(4), f4()}) {
    auto rep = k1_report(r, {2, 3}, budgets);
    ASSERT_EQ(rep.levels.size(), 2u);
    ASSERT_TRUE(rep.stable.has_value());
    EXPECT_TRUE(*rep.stable) << r->name();
    EXPECT_TRUE(rep.levels[1].quotient_abelian) << r->name();
    EXPECT_TRUE(rep.levels[0].k1.same_group(rep.levels[1].k1));
  }
}

TEST(K1, UnitsMapInjectiveForCommutativeRings) {
  for (const auto& r : {f3(), f4(), f5(), rings::zmod(4), rings::zmod(6), rings::dual_numbers(f3()),
                        rings::direct_product(f2(), f3())}) {
    auto rep = k1_report(r, {2}, budgets);
    EXPECT_TRUE(rep.units_map_injective) << r->name();
    EXPECT_TRUE(rep.units_map_surjective) << r->name();
  }
}

TEST(K1, DefaultLevels) {
  EXPECT_EQ(default_k1_levels(f3(), budgets), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(default_k1_levels(rings::dual_numbers(f3()), budgets), (std::vector<std::size_t>{2}));
}

TEST(K1, TriangularBruteMatchesGenerated) {
  auto t = rings::triangular2(f2());
  auto a = k1_level(t, 2, budgets, nullptr, "brute");
  auto b = k1_level(t, 2, budgets, nullptr, "generated");
  EXPECT_TRUE(a.k1.same_group(b.k1));
  EXPECT_EQ(a.k1.describe(), "0");
}

TEST(Whitehead, SpecExamples) {
  auto z5 = f5();
  auto fs = whitehead_factorization(RMatrix(z5, 1, {2}));
  EXPECT_EQ(product(fs, z5, 2), RMatrix(z5, 2, {2, 0, 0, 3}));
  for (const auto& f : fs) EXPECT_TRUE(f.is_elementary());
  auto id = whitehead_factorization(RMatrix::identity(z5, 2));
  EXPECT_EQ(product(id, z5, 4), RMatrix::identity(z5, 4));
  EXPECT_THROW(whitehead_factorization(RMatrix(rings::zmod(4), 1, {2})), NotInvertible);
}

TEST(Whitehead, RandomProperty) {
  std::mt19937 rng(424242);
  for (const auto& r : {f5(), f4(), rings::zmod(4), rings::triangular2(f2())}) {
    for (int t = 0; t < 50; ++t) {
      RMatrix a = random_invertible(r, 2, rng);
      auto fs = whitehead_factorization(a);
      for (const auto& f : fs) ASSERT_TRUE(f.is_elementary()) << f.str();
      EXPECT_EQ(product(fs, r, 4), block_diag(a, inverse_or_throw(a))) << a.str();
    }
  }
}

TEST(Whitehead, SuiteReportsPass) {
  std::mt19937 rng(9);
  EXPECT_TRUE(whitehead_suite(f5(), 2, 30, rng).pass);
  EXPECT_TRUE(whitehead_suite(f4(), 3, 10, rng).pass);
}

TEST(Structural, AllIdentitiesHold) {
  for (const auto& r : {f2(), f3(), rings::zmod(4), f4(), f5()}) {
    for (const auto& c : structural_identities_check(r)) EXPECT_TRUE(c.pass) << r->name() << ": " << c.identity << " " << c.witness;
  }
  EXPECT_EQ(structural_identities_check(f2()).size(), 10u);
}

TEST(Structural, NonunitalRejected) {
  EXPECT_THROW(structural_identities_check(rings::square_zero(2)), NotUnital);
}
