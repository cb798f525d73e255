#include <gtest/gtest.h>

#include <random>

#include "klow/homology.hpp"

using namespace klow;

namespace {

using Dense = std::vector<std::vector<Rational>>;

// plain Gauss-Jordan over Q, independent of the fraction-free routine
std::size_t dense_rank(Dense m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t t = c; t < cols; ++t) m[i][t] -= f * m[r][t];
    }
    ++r;
  }
  return r;
}

Dense inverse(Dense m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n);
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[p], m[c]);
    const Rational lead = m[c][c];
    for (auto& x : m[c]) x /= lead;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t t = 0; t < 2 * n; ++t) m[i][t] -= f * m[c][t];
    }
  }
  Dense out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = m[i][n + j];
  return out;
}

// structure constants in the basis f_a = sum_i p[a][i] e_i
RationalAlgebra change_basis(const RationalAlgebra& a, const Dense& p) {
  const std::size_t d = a.dim;
  const Dense q = inverse(p);  // e_k = sum_c q[k][c] f_c
  auto out = RationalAlgebra::zero_product(a.name + "'", d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          if (p[x][i] == 0 || p[y][j] == 0) continue;
          for (std::size_t k = 0; k < d; ++k) {
            if (a.c(i, j, k) == 0) continue;
            for (std::size_t c = 0; c < d; ++c) out.c(x, y, c) += p[x][i] * p[y][j] * a.c(i, j, k) * q[k][c];
          }
        }
  return out;
}

Dense random_unimodular(std::size_t d, std::mt19937& rng) {
  Dense lower(d, std::vector<Rational>(d)), upper(d, std::vector<Rational>(d)), p(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i) {
    lower[i][i] = upper[i][i] = 1;
    for (std::size_t j = 0; j < i; ++j) lower[i][j] = static_cast<int>(rng() % 5) - 2;
    for (std::size_t j = i + 1; j < d; ++j) upper[i][j] = static_cast<int>(rng() % 5) - 2;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) p[i][j] += lower[i][k] * upper[k][j];
  return p;
}

// dim of the signed coinvariants as d^{n+1} - rank(1 - lambda), with lambda
// written out on tensor words
std::size_t coinvariant_dim_oracle(std::size_t d, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t p = 0; p <= n; ++p) total *= d;
  Dense m(total, std::vector<Rational>(total));
  for (std::size_t x = 0; x < total; ++x) {
    std::vector<std::size_t> w(n + 1);
    std::size_t y = x;
    for (std::size_t p = n + 1; p-- > 0;) {
      w[p] = y % d;
      y /= d;
    }
    std::vector<std::size_t> l{w[n]};
    l.insert(l.end(), w.begin(), w.end() - 1);
    std::size_t lx = 0;
    for (auto i : l) lx = lx * d + i;
    m[x][x] += 1;
    m[lx][x] -= (n % 2 == 0) ? 1 : -1;
  }
  return total - dense_rank(m);
}

}  // namespace

TEST(Algebra, CatalogValidates) {
  for (const auto& a : algebras::all()) EXPECT_NO_THROW(validate_algebra(a)) << a.name;
}

TEST(Algebra, RejectsBadInput) {
  auto a = RationalAlgebra::zero_product("bad", 2);
  a.c(0, 0, 1) = 1;
  a.c(1, 0, 0) = 1;  // (e0 e0) e0 = e1 e0 = e0 but e0 (e0 e0) = e0 e1 = 0
  EXPECT_THROW(validate_algebra(a), BadInput);
  auto q = algebras::rationals();
  q.unit = std::vector<Rational>{2};
  EXPECT_THROW(validate_algebra(q), BadInput);
  auto short_constants = algebras::rationals();
  short_constants.constants.pop_back();
  EXPECT_THROW(validate_algebra(short_constants), BadInput);
}

TEST(Rank, MatchesGaussJordan) {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t rows = 1 + rng() % 7, ncols = 1 + rng() % 7;
    Dense m(rows, std::vector<Rational>(ncols));
    std::vector<QVec> cols(ncols);
    for (std::size_t j = 0; j < ncols; ++j)
      for (std::size_t i = 0; i < rows; ++i)
        if (rng() % 3 == 0) {
          Rational x(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 4));
          x.canonicalize();
          if (x == 0) continue;
          m[i][j] = x;
          cols[j].emplace_back(i, x);
        }
    // dependent columns on purpose
    if (ncols >= 2) {
      QVec sum;
      std::map<std::size_t, Rational> acc;
      for (const auto& [i, x] : cols[0]) acc[i] += 3 * x;
      for (const auto& [i, x] : cols[1]) acc[i] -= x;
      for (auto& [i, x] : acc)
        if (x != 0) sum.emplace_back(i, x);
      cols.push_back(sum);
      for (std::size_t i = 0; i < rows; ++i) m[i].push_back(3 * m[i][0] - m[i][1]);
    }
    EXPECT_EQ(rank_of(cols, rows), dense_rank(m));
  }
}

TEST(HomologyRanks, HandComplex) {
  // Q <-0- 0 <-0- Q
  ChainComplexQ c;
  c.name = "hand";
  c.dims = {1, 0, 1};
  c.boundary = {{}, {}, {QVec{}}};
  c.labels = {{"a"}, {}, {"b"}};
  auto h = homology_ranks(c);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0].free_rank, 1u);
  EXPECT_EQ(h[1].free_rank, 0u);
  EXPECT_EQ(h[2].free_rank, 1u);
  EXPECT_EQ(h[0].describe(), "Z");
}

TEST(Connes, RationalsParityThinned) {
  auto c = build_connes_complex(algebras::rationals(), 4);
  EXPECT_EQ(c.dims, (std::vector<std::size_t>{1, 0, 1, 0, 1}));
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_TRUE(c.boundary_is_zero(n));
  EXPECT_EQ(homology_dims(c), (std::vector<std::size_t>{1, 0, 1, 0, 1}));
  EXPECT_EQ(cyclic_homology(algebras::rationals(), 4), (std::vector<std::size_t>{1, 0, 1, 0, 1}));
}

TEST(Connes, SquareZeroHasZeroBoundary) {
  auto c = build_connes_complex(algebras::square_zero(1), 3);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(c.boundary_is_zero(n));
  auto c2 = build_connes_complex(algebras::square_zero(2), 3);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(c2.boundary_is_zero(n));
}

TEST(Connes, CoinvariantDimsMatchRankOfOneMinusLambda) {
  for (const auto& a : algebras::all())
    for (std::size_t n = 0; n <= 3; ++n) {
      if (a.dim == 4 && n == 3) continue;  // keeps the dense oracle small
      auto c = build_connes_complex(a, n);
      EXPECT_EQ(c.dims[n], coinvariant_dim_oracle(a.dim, n)) << a.name << " n=" << n;
    }
}

TEST(Connes, LabelsAreLeastWordsInLexOrder) {
  auto c = build_connes_complex(algebras::q_times_q(), 2);
  EXPECT_EQ(c.labels[0], (std::vector<std::string>{"[e0]", "[e1]"}));
  // a (x) b ~ -b (x) a kills e0|e0, e1|e1 and leaves one class
  EXPECT_EQ(c.labels[1], (std::vector<std::string>{"[e0|e1]"}));
  EXPECT_EQ(c.labels[2].front(), "[e0|e0|e0]");
}

TEST(Bar, RationalsAlternate) {
  auto c = build_bar_complex(algebras::rationals(), 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    ASSERT_EQ(c.boundary[n].size(), 1u);
    if (n % 2 == 1) {
      ASSERT_EQ(c.boundary[n][0].size(), 1u);
      EXPECT_EQ(c.boundary[n][0][0].second, 1);
    } else {
      EXPECT_TRUE(c.boundary[n][0].empty());
    }
  }
  auto truncated = build_bar_complex(algebras::rationals(), 3);
  auto h = homology_dims(truncated);
  EXPECT_EQ(h[0] + h[1] + h[2], 0u);
  EXPECT_EQ(bar_homology(algebras::rationals(), 3), (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(Bar, SquareZeroHasZeroBoundary) {
  auto c = build_bar_complex(algebras::square_zero(2), 3);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(c.boundary_is_zero(n));
  EXPECT_EQ(bar_homology(algebras::square_zero(1), 3), (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(Homology, HC0MatchesOracle) {
  for (const auto& a : algebras::all()) EXPECT_EQ(cyclic_homology(a, 0)[0], hc0_oracle(a)) << a.name;
  EXPECT_EQ(hc0_oracle(algebras::m2q()), 1u);
  EXPECT_EQ(hc0_oracle(algebras::q_times_q()), 2u);
  EXPECT_EQ(hc0_oracle(algebras::triangular()), 2u);
  for (const auto& a : algebras::all())
    if (a.commutative()) EXPECT_EQ(hc0_oracle(a), a.dim) << a.name;
}

TEST(Homology, UnitalAlgebrasHaveNoBarHomology) {
  for (const auto& a : algebras::all()) {
    if (!a.unit) continue;
    for (auto h : bar_homology(a, 3)) EXPECT_EQ(h, 0u) << a.name;
  }
}

TEST(Homology, MoritaProbe) {
  EXPECT_EQ(cyclic_homology(algebras::m2q(), 2), cyclic_homology(algebras::rationals(), 2));
}

TEST(Homology, ProductIsAdditive) {
  auto q = cyclic_homology(algebras::rationals(), 3);
  auto qq = cyclic_homology(algebras::q_times_q(), 3);
  for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(qq[n], 2 * q[n]);
}

TEST(Homology, InvariantUnderChangeOfBasis) {
  std::mt19937 rng(11);
  for (const auto& a : {algebras::triangular(), algebras::dual_numbers(), algebras::nilpotent_x3(), algebras::group_algebra_z2()}) {
    const auto hc = cyclic_homology(a, 3), hbar = bar_homology(a, 3);
    for (int t = 0; t < 3; ++t) {
      auto b = change_basis(a, random_unimodular(a.dim, rng));
      ASSERT_NO_THROW(validate_algebra(b));
      EXPECT_EQ(cyclic_homology(b, 3), hc) << a.name;
      EXPECT_EQ(bar_homology(b, 3), hbar) << a.name;
    }
  }
}

TEST(Homology, BudgetExceeded) {
  EXPECT_THROW(build_connes_complex(algebras::m2q(), 5), BudgetExceeded);
  Budgets small;
  small.tensor_dim = 10;
  EXPECT_THROW(build_bar_complex(algebras::q_times_q(), 3, small), BudgetExceeded);
  EXPECT_NO_THROW(build_bar_complex(algebras::q_times_q(), 2, small));
}

TEST(Homology, BrokenBoundaryIsCaught) {
  ChainComplexQ c;
  c.name = "broken";
  c.dims = {1, 1, 1};
  c.boundary = {{}, {QVec{{0, Rational(1)}}}, {QVec{{0, Rational(1)}}}};
  c.labels = {{"a"}, {"b"}, {"c"}};
  EXPECT_THROW(assert_complex(c), IdentityFailed);
}

TEST(Excision, Verdicts) {
  auto sz = excisiveness_verdict(algebras::square_zero(1), 3);
  EXPECT_TRUE(sz.obstructed);
  EXPECT_EQ(sz.degree, 0u);
  EXPECT_EQ(sz.dim, 1u);
  EXPECT_FALSE(sz.hidden_unit);

  auto iz = excisiveness_verdict(algebras::augmentation_ideal_z2(), 3);
  EXPECT_FALSE(iz.obstructed);
  EXPECT_EQ(iz.hbar[0], 0u);
  EXPECT_TRUE(iz.hidden_unit);
  EXPECT_EQ(iz.describe(), "no obstruction found up to degree 3");

  auto nil = excisiveness_verdict(algebras::nilpotent_x3(), 2);
  EXPECT_TRUE(nil.obstructed);
  EXPECT_EQ(nil.degree, 0u);
  EXPECT_EQ(nil.dim, 1u);  // A/A^2 spanned by x

  EXPECT_THROW(excisiveness_verdict(algebras::rationals(), 3), UnitalInput);
}

TEST(Excision, FindUnit) {
  for (const auto& a : algebras::all()) {
    auto u = find_unit(a);
    if (a.unit) {
      ASSERT_TRUE(u.has_value()) << a.name;
      EXPECT_EQ(*u, *a.unit) << a.name;
    }
  }
  EXPECT_FALSE(find_unit(algebras::square_zero(2)).has_value());
  EXPECT_EQ(*find_unit(algebras::augmentation_ideal_z2()), (std::vector<Rational>{Rational(-1, 2)}));
}
