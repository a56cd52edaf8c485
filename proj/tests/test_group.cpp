#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "vilenkin/group.hpp"

using namespace vilenkin;

TEST(GroupConfig, CumulativeProductsAndLambda) {
  const GroupConfig g({2, 3, 4, 2, 3});
  EXPECT_EQ(g.depth(), 5);
  EXPECT_EQ(g.size(), 144u);
  EXPECT_EQ(g.cumprod(0), 1u);
  for (int k = 0; k < g.depth(); ++k) EXPECT_EQ(g.cumprod(k + 1), g.cumprod(k) * static_cast<std::size_t>(g.radix(k)));
  EXPECT_EQ(g.lambda(), 4);
  EXPECT_EQ(g.phase_modulus(), 12);
}

TEST(GroupConfig, RejectsBadRadices) {
  EXPECT_THROW(GroupConfig({2, 1, 3}), std::invalid_argument);
  EXPECT_THROW(GroupConfig(std::vector<int>{}), std::invalid_argument);
}

TEST(GroupConfig, EqualityIsByRadices) {
  EXPECT_EQ(GroupConfig::walsh(4), GroupConfig({2, 2, 2, 2}));
  EXPECT_FALSE(GroupConfig::walsh(4) == GroupConfig::walsh(5));
  EXPECT_THROW(require_same_config(GroupConfig::walsh(3), GroupConfig({2, 3, 2})), ConfigMismatch);
}

TEST(Codec, Examples) {
  EXPECT_EQ(point_from_index(GroupConfig::walsh(3), 5).digits, (std::vector<int>{1, 0, 1}));
  const GroupConfig mixed({2, 3, 2});
  EXPECT_EQ(point_from_index(mixed, 5).digits, (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(point_from_index(mixed, 0).digits, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(index_from_point(GroupConfig::walsh(3), GroupPoint{{1, 0, 1}}), 5u);
  EXPECT_EQ(index_from_point(mixed, GroupPoint{{1, 2, 0}}), 5u);
  EXPECT_EQ(index_from_point(mixed, GroupPoint{{0, 0, 0}}), 0u);
}

TEST(Codec, Errors) {
  const GroupConfig mixed({2, 3, 2});
  EXPECT_THROW(point_from_index(mixed, 12), std::out_of_range);
  EXPECT_THROW(index_from_point(mixed, GroupPoint{{0, 3, 0}}), std::out_of_range);
  EXPECT_THROW(index_from_point(mixed, GroupPoint{{0, 1}}), ConfigMismatch);
}

TEST(Codec, RoundTripMatchesDivisionOracle) {
  for (const GroupConfig& g : {GroupConfig({2, 3, 4, 2, 3}), GroupConfig::walsh(10)}) {
    for (std::size_t x = 0; x < g.size(); ++x) {
      const GroupPoint p = point_from_index(g, x);
      EXPECT_EQ(p.digits, oracle::digits(g, x));
      EXPECT_EQ(index_from_point(g, p), x);
    }
  }
}

TEST(GroupArithmetic, SubtractionExamples) {
  const GroupConfig g({3, 2, 2});
  const GroupPoint x{{0, 1, 1}};
  const GroupPoint t{{1, 0, 1}};
  EXPECT_EQ(group_sub(g, x, t).digits, (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(group_sub(g, x, x).digits, (std::vector<int>{0, 0, 0}));
  EXPECT_THROW(group_sub(GroupConfig::walsh(3), GroupPoint{{0, 0}}, GroupPoint{{0, 0, 0}}), ConfigMismatch);
}

TEST(GroupArithmetic, ExhaustiveInverseAndIdentity) {
  const GroupConfig g({2, 3, 4, 2});  // M_N = 48
  for (std::size_t x = 0; x < g.size(); ++x) {
    EXPECT_EQ(sub_indices(g, x, 0), x);
    EXPECT_EQ(sub_indices(g, x, x), 0u);
    for (std::size_t t = 0; t < g.size(); ++t) {
      EXPECT_EQ(sub_indices(g, add_indices(g, x, t), t), x);
      EXPECT_EQ(add_indices(g, x, t), add_indices(g, t, x));
      const auto px = point_from_index(g, x);
      const auto pt = point_from_index(g, t);
      EXPECT_EQ(index_from_point(g, group_sub(g, px, pt)), sub_indices(g, x, t));
    }
  }
}

TEST(Interval, Examples) {
  const GroupConfig g = GroupConfig::walsh(3);
  const GroupPoint zero{{0, 0, 0}};
  EXPECT_EQ(interval(g, 0, zero).size(), 8u);
  const CellSet single = interval(g, 3, GroupPoint{{1, 1, 0}});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.indices()[0], 3u);
  const CellSet i1 = interval(g, 1, zero);
  EXPECT_EQ(std::vector<std::size_t>(i1.indices().begin(), i1.indices().end()), (std::vector<std::size_t>{0, 2, 4, 6}));
  EXPECT_THROW(interval(g, 4, zero), std::out_of_range);
}

TEST(Interval, CardinalityMembershipAndMeasure) {
  const GroupConfig g({2, 3, 4, 2, 3});
  for (int n = 0; n <= g.depth(); ++n) {
    for (std::size_t x = 0; x < g.size(); x += 7) {
      const CellSet I = interval(g, n, point_from_index(g, x));
      EXPECT_EQ(I.size(), g.size() / g.cumprod(n));
      EXPECT_TRUE(I.contains(x));
      EXPECT_EQ(haar_measure(I), Rational(1, g.cumprod(n)));
      // Definition: same first n digits.
      const auto dx = oracle::digits(g, x);
      for (std::size_t y : I.indices()) {
        const auto dy = oracle::digits(g, y);
        for (int k = 0; k < n; ++k) EXPECT_EQ(dx[static_cast<std::size_t>(k)], dy[static_cast<std::size_t>(k)]);
      }
    }
  }
}

TEST(HaarMeasure, WholeAndEmpty) {
  const GroupConfig g({2, 3});
  EXPECT_EQ(haar_measure(whole_group(g)), Rational(1, 1));
  EXPECT_EQ(haar_measure(CellSet(g, {})), Rational(0, 1));
}

TEST(CellSet, RejectsUnsortedOrOutOfRange) {
  const GroupConfig g = GroupConfig::walsh(2);
  EXPECT_THROW(CellSet(g, {2, 1}), std::invalid_argument);
  EXPECT_THROW(CellSet(g, {1, 1}), std::invalid_argument);
  EXPECT_THROW(CellSet(g, {4}), std::out_of_range);
}

TEST(Annulus, WalshDepthTwoExamples) {
  const GroupConfig g = GroupConfig::walsh(2);
  const CellSet c02 = annulus_cell(g, 2, 0, 2);
  ASSERT_EQ(c02.size(), 1u);
  EXPECT_EQ(point_from_index(g, c02.indices()[0]).digits, (std::vector<int>{1, 0}));
  const CellSet c01 = annulus_cell(g, 2, 0, 1);
  ASSERT_EQ(c01.size(), 1u);
  EXPECT_EQ(point_from_index(g, c01.indices()[0]).digits, (std::vector<int>{1, 1}));
  EXPECT_TRUE(c01.disjoint_from(c02));
  EXPECT_THROW(annulus_cell(g, 2, 1, 1), std::invalid_argument);
}

TEST(Annulus, PositionAgreesWithCellMembership) {
  const GroupConfig g({2, 3, 2, 3});
  const int level = 4;
  for (const CellSet& cell : annulus_cells(g, level)) {
    std::set<std::pair<int, int>> seen;
    for (std::size_t x : cell.indices()) {
      const auto pos = annulus_position(g, level, x);
      seen.insert({pos.i, pos.j});
    }
    EXPECT_EQ(seen.size(), 1u);
  }
  EXPECT_THROW(annulus_position(g, level, 0), std::invalid_argument);
}

TEST(Annulus, PartitionExamples) {
  EXPECT_TRUE(verify_partition(GroupConfig::walsh(2), 2));
  EXPECT_TRUE(verify_partition(GroupConfig({2, 3, 4}), 3));
}

TEST(Annulus, PartitionExhaustiveSmallConfigs) {
  for (int depth = 2; depth <= 6; ++depth) {
    for (int r : {2, 3, 4}) {
      if (depth == 6 && r == 4) continue;  // 4096 points; covered by mixed configs below
      const GroupConfig g = GroupConfig::uniform(r, depth);
      EXPECT_TRUE(verify_partition(g, depth)) << g.describe();
    }
  }
  for (const GroupConfig& g : {GroupConfig({2, 3, 4, 2, 3, 4}), GroupConfig({4, 3, 2, 4}), GroupConfig({3, 2, 4, 2, 3})}) {
    for (int level = 2; level <= g.depth(); ++level) EXPECT_TRUE(verify_partition(g, level)) << g.describe();
  }
}

TEST(Annulus, MeasuresSumToComplement) {
  const GroupConfig g({2, 3, 4});
  Rational total;
  for (const CellSet& c : annulus_cells(g, 3)) total = total + haar_measure(c);
  EXPECT_EQ(total, Rational(23, 24));
}
