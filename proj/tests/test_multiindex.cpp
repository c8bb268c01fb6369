#include <gtest/gtest.h>

#include <random>
#include <set>

#include "difftaylor/multiindex.hpp"

namespace difftaylor {
namespace {

// Row-by-row Pascal triangle, independent of the library's factorial formula.
BigInt pascal(unsigned n, unsigned k) {
  std::vector<BigInt> row{1};
  for (unsigned r = 1; r <= n; ++r) {
    std::vector<BigInt> next(r + 1, 1);
    for (unsigned j = 1; j < r; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return k <= n ? row[k] : BigInt(0);
}

TEST(MultiIndex, ComponentwiseOrder) {
  EXPECT_TRUE(le({1, 2}, {2, 2}));
  EXPECT_FALSE(le({2, 0}, {1, 5}));
  EXPECT_TRUE(le({0, 0}, {0, 0}));
}

TEST(MultiIndex, AddAndSub) {
  EXPECT_EQ(add({1, 0}, {0, 2}), MultiIndex({1, 2}));
  EXPECT_EQ(sub({3, 1}, {1, 1}), MultiIndex({2, 0}));
  EXPECT_THROW(sub({1, 0}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(add({1}, {1, 2}), std::invalid_argument);
}

TEST(MultiIndex, FactorialAndBinomial) {
  EXPECT_EQ(factorial({3, 2}), 12);
  EXPECT_EQ(binomial({2, 1}, {1, 0}), 2);
  EXPECT_EQ(binomial({4, 4}, {2, 2}), pascal(4, 2) * pascal(4, 2));
  EXPECT_EQ(binomial({4, 4}, {2, 2}), 36);
}

TEST(MultiIndex, BinomialMatchesPascalProducts) {
  for (unsigned a = 0; a <= 9; ++a) {
    for (unsigned b = 0; b <= 9; ++b) {
      for (unsigned c = 0; c <= a; ++c) {
        for (unsigned d = 0; d <= b; ++d) {
          ASSERT_EQ(binomial({a, b}, {c, d}), pascal(a, c) * pascal(b, d)) << a << b << c << d;
        }
      }
    }
  }
  EXPECT_EQ(binomial({60}, {30}), pascal(60, 30));
}

TEST(MultiIndex, TotalDegree) {
  EXPECT_EQ(total_degree({0, 0}), 0U);
  EXPECT_EQ(total_degree({2, 3}), 5U);
  EXPECT_EQ(total_degree({7}), 7U);
}

TEST(MultiIndex, EnumerationOrder) {
  EXPECT_EQ(enumerate_upto(1, 3), (std::vector<MultiIndex>{{0}, {1}, {2}, {3}}));
  EXPECT_EQ(enumerate_upto(2, 1), (std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(enumerate_upto(2, 2), (std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}));
}

TEST(MultiIndex, EnumerationCountIsStarsAndBars) {
  EXPECT_EQ(enumerate_upto(2, 6).size(), 28U);
  for (std::size_t m = 1; m <= 4; ++m) {
    for (unsigned n = 0; n <= 7; ++n) {
      const auto all = enumerate_upto(m, n);
      ASSERT_EQ(BigInt(static_cast<unsigned long>(all.size())), pascal(n + static_cast<unsigned>(m), m));
      const std::set<std::vector<unsigned>> distinct = [&] {
        std::set<std::vector<unsigned>> s;
        for (const auto& a : all) s.insert(a.to_vector());
        return s;
      }();
      ASSERT_EQ(distinct.size(), all.size());
      for (std::size_t k = 1; k < all.size(); ++k) ASSERT_TRUE(grlex_less(all[k - 1], all[k]));
    }
  }
}

TEST(GradedIndexSet, RankAndShiftTables) {
  const GradedIndexSet idx(3, 5);
  ASSERT_EQ(idx.size(), 56U);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& a = idx[k];
    ASSERT_EQ(idx.rank(a), k);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto up = add(a, MultiIndex::unit(3, i));
      if (up.total_degree() <= 5) {
        ASSERT_EQ(idx.raise(k, i), idx.rank(up));
      } else {
        ASSERT_EQ(idx.raise(k, i), GradedIndexSet::npos);
      }
      if (a[i] > 0) {
        ASSERT_EQ(idx.lower(k, i), idx.rank(sub(a, MultiIndex::unit(3, i))));
      } else {
        ASSERT_EQ(idx.lower(k, i), GradedIndexSet::npos);
      }
    }
  }
  for (unsigned d = 0; d <= 5; ++d) EXPECT_EQ(BigInt(static_cast<unsigned long>(idx.count_upto(d))), pascal(d + 3, 3));
  EXPECT_FALSE(idx.contains({3, 3, 0}));
  EXPECT_THROW(idx.rank({3, 3, 0}), std::out_of_range);
}

TEST(MultiIndex, GrlexIsAStrictTotalOrder) {
  std::mt19937 gen(11);
  std::uniform_int_distribution<unsigned> entry(0, 3);
  for (int n = 0; n < 2000; ++n) {
    const MultiIndex a{entry(gen), entry(gen)};
    const MultiIndex b{entry(gen), entry(gen)};
    const MultiIndex c{entry(gen), entry(gen)};
    ASSERT_FALSE(grlex_less(a, a));
    ASSERT_EQ(grlex_less(a, b) || grlex_less(b, a), a != b);
    if (grlex_less(a, b) && grlex_less(b, c)) {
      ASSERT_TRUE(grlex_less(a, c));
    }
  }
}

TEST(Fault, BinomialTableCorruptionIsScoped) {
  {
    fault::ScopedFault guard(fault::Kind::kBinomialTable);
    EXPECT_EQ(binomial({2}, {1}), 3);
    EXPECT_EQ(binomial({2}, {0}), 1);
  }
  EXPECT_EQ(binomial({2}, {1}), 2);
}

}  // namespace
}  // namespace difftaylor
