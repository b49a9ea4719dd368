#include <gtest/gtest.h>

#include "raterel/error.hpp"
#include "raterel/rating_matrix.hpp"
#include "test_util.hpp"

using namespace raterel;

namespace {
const Scale kAB = Scale::nominal({"a", "b"});
}

TEST(RatingMatrix, BuildKeepsFirstAppearanceOrder) {
  const std::vector<Rating> ratings{{"u2", "r1", "a"}, {"u1", "r2", "b"}, {"u2", "r2", "b"}};
  const auto m = RatingMatrix::build(ratings, kAB);
  ASSERT_EQ(m.unit_count(), 2u);
  EXPECT_EQ(m.units()[0], "u2");
  EXPECT_EQ(m.raters()[1], "r2");
  EXPECT_EQ(m.cell(0, 0), 0.0);
  EXPECT_FALSE(m.cell(1, 0));
  EXPECT_EQ(m.cell_count(), 3u);
}

TEST(RatingMatrix, DuplicateCellIsRejected) {
  const std::vector<Rating> ratings{{"u1", "r1", "a"}, {"u1", "r1", "b"}};
  EXPECT_THROW(RatingMatrix::build(ratings, kAB), InputError);
}

TEST(RatingMatrix, InadmissibleValueNamesTheCell) {
  const std::vector<Rating> ratings{{"u7", "judge", "c"}};
  try {
    RatingMatrix::build(ratings, kAB);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("u7"), std::string::npos);
    EXPECT_NE(what.find("judge"), std::string::npos);
    EXPECT_NE(what.find("c"), std::string::npos);
  }
}

TEST(PairableUnits, KeepsUnitsWithTwoOrMoreCells) {
  const auto m = testutil::matrix({{"a", "a", std::nullopt}, {"a", std::nullopt, std::nullopt}, {"a", "b", "b"}}, kAB);
  const auto p = pairable_units(m);
  ASSERT_EQ(p.unit_count(), 2u);
  EXPECT_EQ(p.units()[0], "u0");
  EXPECT_EQ(p.units()[1], "u2");
}

TEST(PairableUnits, AllSingletonsSignalEmptyMatrix) {
  const auto m = testutil::matrix({{"a", std::nullopt}, {std::nullopt, "b"}}, kAB);
  try {
    pairable_units(m);
    FAIL();
  } catch (const UndefinedAgreement& e) {
    EXPECT_EQ(e.reason(), UndefinedReason::empty_matrix);
  }
}

TEST(PairableUnits, FullMatrixUnchangedAndIdempotent) {
  const auto m = testutil::four_unit_binary();
  const auto p = pairable_units(m);
  EXPECT_EQ(p.unit_count(), m.unit_count());
  const auto pp = pairable_units(p);
  EXPECT_EQ(pp.unit_count(), p.unit_count());
  for (std::size_t u = 0; u < p.unit_count(); ++u) {
    for (std::size_t r = 0; r < p.rater_count(); ++r) EXPECT_EQ(p.cell(u, r), pp.cell(u, r));
  }
}

TEST(ValueFrequencies, DirectCount) {
  const auto m = testutil::matrix({{"a", "a", "b"}}, kAB);
  const auto f = value_frequencies(m);
  EXPECT_EQ(f.count(0.0), 2u);
  EXPECT_EQ(f.count(1.0), 1u);
  EXPECT_EQ(f.total, 3u);
}

TEST(ValueFrequencies, FourUnitBinaryPoolsThreeAndFive) {
  const auto f = value_frequencies(testutil::four_unit_binary());
  EXPECT_EQ(f.count(0.0), 3u);
  EXPECT_EQ(f.count(1.0), 5u);
  EXPECT_EQ(f.total, 8u);
}

TEST(ValueFrequencies, IgnoresUnpairableCellsAndSeedsAllCategories) {
  const auto s = Scale::ordinal({"1", "2", "3"});
  const auto m = testutil::matrix({{"1", "1"}, {"3", std::nullopt}}, s);
  const auto f = value_frequencies(m);
  EXPECT_EQ(f.total, 2u);
  EXPECT_EQ(f.count(2.0), 0u);
  EXPECT_EQ(f.counts.size(), 3u);
  EXPECT_EQ(f.distinct_observed(), 1u);
}

TEST(ValueFrequencies, InvariantUnderPermutations) {
  const auto m = testutil::matrix({{"a", "b", "b"}, {"b", std::nullopt, "a"}, {"a", "a", std::nullopt}}, kAB);
  const std::vector<std::size_t> units{2, 0, 1};
  const std::vector<std::size_t> raters{1, 2, 0};
  const auto f = value_frequencies(m);
  const auto g = value_frequencies(m.select_units(units).select_raters(raters));
  EXPECT_EQ(f.counts, g.counts);
}

TEST(ValueFrequencies, EmptyMatrixErrors) {
  const auto m = testutil::matrix({{"a", std::nullopt}}, kAB);
  EXPECT_THROW(value_frequencies(m), UndefinedAgreement);
}
