#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "raterel/agreement.hpp"
#include "raterel/error.hpp"
#include "raterel/kernels.hpp"
#include "test_util.hpp"

using namespace raterel;

namespace {

constexpr ScaleKind kKinds[] = {ScaleKind::nominal, ScaleKind::ordinal, ScaleKind::interval};
constexpr ExpectedMode kModes[] = {ExpectedMode::with_replacement, ExpectedMode::without_replacement};

std::optional<double> try_alpha(const RatingMatrix& m, ExpectedMode mode,
                                Execution exec = Execution::serial) {
  try {
    return krippendorff_alpha(m, mode, exec).alpha;
  } catch (const UndefinedAgreement&) {
    return std::nullopt;
  }
}

}  // namespace

TEST(Agreement, FourUnitBinaryExample) {
  const auto r = krippendorff_alpha(testutil::four_unit_binary());
  EXPECT_DOUBLE_EQ(r.observed_disagreement, 0.25);
  EXPECT_DOUBLE_EQ(r.expected_disagreement, 0.46875);
  EXPECT_NEAR(r.alpha, 1.0 - 0.25 / 0.46875, 1e-15);
  EXPECT_NEAR(r.alpha, 0.4667, 5e-5);
  EXPECT_EQ(r.pair_count, 4u);
  EXPECT_EQ(r.scale, ScaleKind::nominal);
}

TEST(Agreement, PerfectAgreementIsOne) {
  const auto s = Scale::ordinal({"1", "2", "3"});
  const auto m = testutil::matrix({{"1", "1", "1"}, {"3", "3", std::nullopt}, {"2", "2", "2"}}, s);
  for (auto mode : kModes) EXPECT_EQ(krippendorff_alpha(m, mode).alpha, 1.0);
}

TEST(Agreement, NoVariationIsUndefinedNotOne) {
  const auto m = testutil::matrix({{"a", "a"}, {"a", "a"}}, Scale::nominal({"a", "b"}));
  try {
    krippendorff_alpha(m);
    FAIL() << "alpha must be undefined";
  } catch (const UndefinedAgreement& e) {
    EXPECT_EQ(e.reason(), UndefinedReason::no_variation);
  }
}

TEST(Agreement, EmptyMatrixIsUndefined) {
  const auto m = testutil::matrix({{"a", std::nullopt}}, Scale::nominal({"a", "b"}));
  EXPECT_THROW(krippendorff_alpha(m), UndefinedAgreement);
}

TEST(ExpectedDisagreement, SkewedBinaryMarginals) {
  ValueFrequencies f;
  f.counts = {{0.0, 95}, {1.0, 5}};
  f.total = 100;
  EXPECT_NEAR(expected_disagreement(f, DistanceFunction::nominal()), 0.095, 1e-15);
  f.counts = {{0.0, 50}, {1.0, 50}};
  EXPECT_DOUBLE_EQ(expected_disagreement(f, DistanceFunction::nominal()), 0.5);
  f.counts = {{0.0, 100}, {1.0, 0}};
  EXPECT_EQ(expected_disagreement(f, DistanceFunction::nominal()), 0.0);
}

TEST(ExpectedDisagreement, WithoutReplacementExcludesSelfPairs) {
  ValueFrequencies f;
  f.counts = {{0.0, 3}, {1.0, 5}};
  f.total = 8;
  EXPECT_DOUBLE_EQ(expected_disagreement(f, DistanceFunction::nominal(), ExpectedMode::without_replacement),
                   2.0 * 3 * 5 / (8.0 * 7.0));
  f.counts = {{0.0, 1}};
  f.total = 1;
  EXPECT_THROW(expected_disagreement(f, DistanceFunction::nominal()), InputError);
}

TEST(Agreement, MatchesBruteForceOracle) {
  std::mt19937_64 rng(20240611);
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      for (auto mode : kModes) {
        const auto expected = oracle::alpha(m, mode);
        const auto got = try_alpha(m, mode);
        ASSERT_EQ(got.has_value(), expected.alpha.has_value()) << "iteration " << i;
        if (!got) continue;
        const auto report = krippendorff_alpha(m, mode, Execution::serial);
        EXPECT_LE(oracle::relative_error(report.observed_disagreement, expected.d_o), 1e-9);
        EXPECT_LE(oracle::relative_error(report.expected_disagreement, expected.d_e), 1e-9);
        EXPECT_LE(oracle::relative_error(*got, *expected.alpha), 1e-9);
        EXPECT_EQ(report.pair_count, expected.pairs);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 1000);
}

TEST(Agreement, SerialAndParallelAreBitIdentical) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      for (auto mode : kModes) {
        const auto a = try_alpha(m, mode, Execution::serial);
        const auto b = try_alpha(m, mode, Execution::parallel);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_EQ(*a, *b);
      }
    }
  }
}

TEST(AgreementProperties, DistanceScalingLeavesAlphaUnchanged) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      const auto base = try_alpha(m, ExpectedMode::with_replacement);
      if (!base) continue;
      const auto p = pairable_units(m);
      const auto d = DistanceFunction::for_scale(p.scale(), value_frequencies(p));
      for (double k : {0.001, 2.5, 1e6}) {
        const auto scaled = krippendorff_alpha(m, d.scaled(k)).alpha;
        EXPECT_NEAR(scaled, *base, 1e-12);
      }
    }
  }
}

TEST(AgreementProperties, NominalRelabelingInvariance) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto m = oracle::random_matrix(rng, ScaleKind::nominal);
    const auto k = m.scale().category_count();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::optional<double>> cells;
    for (std::size_t u = 0; u < m.unit_count(); ++u) {
      for (std::size_t r = 0; r < m.rater_count(); ++r) {
        auto v = m.cell(u, r);
        cells.push_back(v ? std::optional<double>(static_cast<double>(perm[static_cast<std::size_t>(*v)])) : std::nullopt);
      }
    }
    const auto relabeled = RatingMatrix::from_cells({m.units().begin(), m.units().end()},
                                                    {m.raters().begin(), m.raters().end()}, cells, m.scale());
    for (auto mode : kModes) {
      const auto a = try_alpha(m, mode);
      const auto b = try_alpha(relabeled, mode);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) EXPECT_NEAR(*a, *b, 1e-12);
    }
  }
}

TEST(AgreementProperties, RaterAndUnitPermutationInvariance) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      std::vector<std::size_t> units(m.unit_count()), raters(m.rater_count());
      std::iota(units.begin(), units.end(), 0);
      std::iota(raters.begin(), raters.end(), 0);
      std::shuffle(units.begin(), units.end(), rng);
      std::shuffle(raters.begin(), raters.end(), rng);
      const auto permuted = m.select_units(units).select_raters(raters);
      for (auto mode : kModes) {
        const auto a = try_alpha(m, mode);
        const auto b = try_alpha(permuted, mode);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_NEAR(*a, *b, 1e-12);
      }
    }
  }
}

TEST(AgreementProperties, SingleRatingUnitsDoNotMatter) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      // Append units holding one rating each.
      std::vector<std::string> units(m.units().begin(), m.units().end());
      std::vector<std::optional<double>> cells;
      for (std::size_t u = 0; u < m.unit_count(); ++u) {
        for (std::size_t r = 0; r < m.rater_count(); ++r) cells.push_back(m.cell(u, r));
      }
      for (int extra = 0; extra < 3; ++extra) {
        units.push_back("single" + std::to_string(extra));
        for (std::size_t r = 0; r < m.rater_count(); ++r) {
          cells.push_back(r == static_cast<std::size_t>(extra) % m.rater_count()
                              ? std::optional<double>(kind == ScaleKind::interval ? 6.5 : 0.0)
                              : std::nullopt);
        }
      }
      const auto padded = RatingMatrix::from_cells(units, {m.raters().begin(), m.raters().end()}, cells, m.scale());
      for (auto mode : kModes) {
        const auto a = try_alpha(m, mode);
        const auto b = try_alpha(padded, mode);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) EXPECT_EQ(*a, *b);
      }
    }
  }
}

TEST(AgreementProperties, IdenticalRatersGiveOneOrUndefined) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      // Copy the first present value of each unit into every cell.
      std::vector<std::optional<double>> cells;
      for (std::size_t u = 0; u < m.unit_count(); ++u) {
        std::optional<double> first;
        for (std::size_t r = 0; r < m.rater_count() && !first; ++r) first = m.cell(u, r);
        for (std::size_t r = 0; r < m.rater_count(); ++r) cells.push_back(first);
      }
      const auto agreed = RatingMatrix::from_cells({m.units().begin(), m.units().end()},
                                                   {m.raters().begin(), m.raters().end()}, cells, m.scale());
      for (auto mode : kModes) {
        const auto a = try_alpha(agreed, mode);
        if (a) EXPECT_EQ(*a, 1.0);
      }
    }
  }
}

TEST(Bootstrap, DeterministicForSeedAndIndependentOfExecution) {
  std::mt19937_64 rng(99);
  const auto m = oracle::random_matrix(rng, ScaleKind::ordinal);
  BootstrapOptions o;
  o.replicates = 300;
  o.seed = 5;
  o.exec = Execution::serial;
  const auto a = bootstrap_ci(m, ExpectedMode::with_replacement, o);
  const auto b = bootstrap_ci(m, ExpectedMode::with_replacement, o);
  o.exec = Execution::parallel;
  const auto c = bootstrap_ci(m, ExpectedMode::with_replacement, o);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_EQ(a.lo, c.lo);
  EXPECT_EQ(a.hi, c.hi);
  EXPECT_EQ(a.skipped, c.skipped);
  EXPECT_LE(a.lo, a.hi);
}

TEST(Bootstrap, IntervalBracketsPointEstimateOnLargeSample) {
  std::mt19937_64 rng(3);
  std::vector<Rating> ratings;
  std::bernoulli_distribution agree(0.8);
  std::bernoulli_distribution coin(0.5);
  for (int u = 0; u < 400; ++u) {
    const bool x = coin(rng);
    const bool y = agree(rng) ? x : !x;
    ratings.push_back({std::to_string(u), "r1", x ? "1" : "0"});
    ratings.push_back({std::to_string(u), "r2", y ? "1" : "0"});
  }
  const auto m = RatingMatrix::build(ratings, Scale::nominal({"0", "1"}));
  const double alpha = krippendorff_alpha(m).alpha;
  BootstrapOptions o;
  o.replicates = 500;
  const auto ci = bootstrap_ci(m, ExpectedMode::with_replacement, o);
  EXPECT_LT(ci.lo, alpha);
  EXPECT_GT(ci.hi, alpha);
  EXPECT_EQ(ci.replicates, 500u);
}

TEST(Bootstrap, RejectsBadOptions) {
  BootstrapOptions o;
  o.replicates = 0;
  EXPECT_THROW(bootstrap_ci(testutil::four_unit_binary(), ExpectedMode::with_replacement, o), InputError);
  o.replicates = 10;
  o.level = 1.0;
  EXPECT_THROW(bootstrap_ci(testutil::four_unit_binary(), ExpectedMode::with_replacement, o), InputError);
}

TEST(CrossGroup, MatchesOracle) {
  std::mt19937_64 rng(21);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    for (auto kind : kKinds) {
      const auto m = oracle::random_matrix(rng, kind);
      std::vector<int> groups(m.rater_count());
      for (std::size_t r = 0; r < groups.size(); ++r) groups[r] = r % 2 == 0 ? 0 : 1;
      std::shuffle(groups.begin(), groups.end(), rng);
      for (auto mode : kModes) {
        const auto expected = oracle::cross_alpha(m, groups, mode);
        std::optional<double> got;
        try {
          got = cross_group_alpha(m, groups, mode).alpha;
        } catch (const UndefinedAgreement&) {
        }
        ASSERT_EQ(got.has_value(), expected.alpha.has_value());
        if (got) {
          EXPECT_LE(oracle::relative_error(*got, *expected.alpha), 1e-9);
          ++compared;
        }
        EXPECT_EQ(cross_pair_count(m, groups), expected.pairs);
      }
    }
  }
  EXPECT_GT(compared, 500);
}

TEST(CrossGroup, IdenticalGroupsAgreePerfectly) {
  const auto m = testutil::matrix({{"a", "a"}, {"b", "b"}, {"a", "a"}}, Scale::nominal({"a", "b"}));
  const std::vector<int> groups{0, 1};
  EXPECT_EQ(cross_group_alpha(m, groups).alpha, 1.0);
}

TEST(CrossGroup, RejectsMalformedGroups) {
  const auto m = testutil::four_unit_binary();
  const std::vector<int> short_groups{0};
  const std::vector<int> bad_groups{0, 2};
  EXPECT_THROW(cross_group_alpha(m, short_groups), InputError);
  EXPECT_THROW(cross_group_alpha(m, bad_groups), InputError);
}

TEST(Kernels, PairwiseSumIsExactOnIntegers) {
  std::vector<double> xs(1000);
  std::iota(xs.begin(), xs.end(), 1.0);
  EXPECT_EQ(kernels::pairwise_sum(xs), 500500.0);
  EXPECT_EQ(kernels::pairwise_sum({}), 0.0);
}

TEST(Kernels, TallyTableCountsPairs) {
  const auto t = kernels::TallyTable::from_matrix(testutil::four_unit_binary());
  EXPECT_EQ(t.unit_count(), 4u);
  EXPECT_EQ(t.pair_count(), 4u);
}

TEST(ReportJson, CarriesFields) {
  const auto j = krippendorff_alpha(testutil::four_unit_binary()).to_json();
  EXPECT_EQ(j.at("mode"), "with-replacement");
  EXPECT_EQ(j.at("scale"), "nominal");
  EXPECT_EQ(j.at("n_pairs"), 4);
  EXPECT_FALSE(j.contains("ci"));
}

TEST(ExpectedModeNames, RoundTrip) {
  for (auto mode : kModes) EXPECT_EQ(parse_expected_mode(to_string(mode)), mode);
  EXPECT_THROW(parse_expected_mode("sometimes"), InputError);
}
