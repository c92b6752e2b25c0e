#include "lgh/smith.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lgh;

namespace {

using Dense = std::vector<std::vector<long>>;

SparseMatrix sparse(const Dense& a) {
  SparseMatrix m(a.size(), a.empty() ? 0 : a[0].size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a[r].size(); ++c) m.add(r, c, a[r][c]);
  }
  return m;
}

BigInt determinant(std::vector<std::vector<BigInt>> a) {
  // Bareiss fraction-free elimination
  const std::size_t n = a.size();
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from determinantal divisors: d_k = gcd of all k x k minors, s_k = d_k / d_{k-1}.
SmithResult minors_oracle(const Dense& a) {
  const std::size_t m = a.size(), n = a[0].size();
  SmithResult out;
  BigInt previous = 1;
  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m, k, 0, cur, rs);
    subsets(n, k, 0, cur, cs);
    BigInt g = 0;
    for (const auto& r : rs) {
      for (const auto& c : cs) {
        std::vector<std::vector<BigInt>> minor(k, std::vector<BigInt>(k));
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) minor[i][j] = a[r[i]][c[j]];
        }
        g = boost::multiprecision::gcd(g, determinant(minor));
      }
    }
    if (g == 0) break;
    ++out.rank;
    const BigInt factor = g / previous;
    if (factor > 1) out.torsion.push_back(factor);
    previous = g;
  }
  return out;
}

}  // namespace

TEST(Smith, ZeroAndEmpty) {
  EXPECT_EQ(smith_form(SparseMatrix(3, 4)).rank, 0u);
  EXPECT_TRUE(smith_form(SparseMatrix(0, 0)).torsion.empty());
  EXPECT_EQ(rank_mod2(SparseMatrix(2, 2)), 0u);
}

TEST(Smith, SingleEntry) {
  const SmithResult r = smith_form(sparse({{2}}));
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(r.torsion, std::vector<BigInt>{2});
  EXPECT_EQ(rank_mod2(sparse({{2}})), 0u);
}

TEST(Smith, KnownForms) {
  // diag(2, 3) ~ diag(1, 6)
  EXPECT_EQ(smith_form(sparse({{2, 0}, {0, 3}})).torsion, std::vector<BigInt>{6});
  EXPECT_EQ(smith_form(sparse({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})).torsion, (std::vector<BigInt>{2, 6, 12}));
  const SmithResult mixed = smith_form(sparse({{1, 1, 0}, {1, -1, 0}, {0, 0, 0}}));
  EXPECT_EQ(mixed.rank, 2u);
  EXPECT_EQ(mixed.torsion, std::vector<BigInt>{2});
}

TEST(Smith, AgreesWithDeterminantalDivisors) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
    Dense a(m, std::vector<long>(n));
    const int spread = trial % 3 == 0 ? 1 : 6;
    for (auto& row : a) {
      for (long& v : row) v = rng() % 3 == 0 ? 0 : static_cast<long>(rng() % (2 * spread + 1)) - spread;
    }
    const SmithResult expected = minors_oracle(a);
    const SmithResult got = smith_form(sparse(a));
    EXPECT_EQ(got.rank, expected.rank) << "trial " << trial;
    EXPECT_EQ(got.torsion, expected.torsion) << "trial " << trial;
  }
}

TEST(Smith, RankModTwoMatchesOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    Dense a(m, std::vector<long>(n));
    for (auto& row : a) {
      for (long& v : row) v = static_cast<long>(rng() % 5) - 2;
    }
    const SmithResult z = minors_oracle(a);
    std::size_t even = 0;
    for (const BigInt& t : z.torsion) even += t % 2 == 0 ? 1 : 0;
    EXPECT_EQ(rank_mod2(sparse(a)), z.rank - even);
  }
}

TEST(Sparse, MultiplyAndReduce) {
  const SparseMatrix a = sparse({{1, 2}, {0, 3}});
  const SparseMatrix b = sparse({{1, 0}, {-1, 1}});
  const SparseMatrix ab = a.multiply(b);
  EXPECT_EQ(ab.at(0, 0), -1);
  EXPECT_EQ(ab.at(0, 1), 2);
  EXPECT_EQ(ab.at(1, 0), -3);
  EXPECT_EQ(ab.at(1, 1), 3);
  EXPECT_EQ(a.reduced_mod2().nonzeros(), 2u);
  SparseMatrix c(1, 1);
  c.add(0, 0, 2);
  c.add(0, 0, -2);
  EXPECT_TRUE(c.is_zero());
}
