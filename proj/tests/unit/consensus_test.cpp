#include <gtest/gtest.h>

#include <cmath>

#include "raterel/consensus.hpp"
#include "raterel/error.hpp"

using namespace raterel;

namespace {

JudgeRun make_run(std::size_t index, const std::vector<std::pair<std::string, std::optional<std::string>>>& labels,
                  bool sampling = true) {
  JudgeRun run;
  run.judge_name = "j";
  run.run_index = index;
  run.sampling_enabled = sampling;
  for (const auto& [id, label] : labels) {
    RunRecord r;
    r.task_id = id;
    r.parsed_label = label;
    if (!label) r.parse_error = "unparsed";
    run.records.push_back(r);
  }
  return run;
}

}  // namespace

TEST(MajorityVote, StrictPlurality) {
  const std::vector<Label> v{"a", "b", "a"};
  EXPECT_EQ(majority_vote(v, TieRule::abstain()), "a");
}

TEST(MajorityVote, TieRules) {
  const std::vector<Label> v{"a", "b"};
  EXPECT_EQ(majority_vote(v, TieRule::abstain()), std::nullopt);
  EXPECT_EQ(majority_vote(v, TieRule::prefer("b")), "b");
  EXPECT_EQ(majority_vote(v, TieRule::prefer("c")), std::nullopt);
  EXPECT_THROW(majority_vote(v, TieRule::error()), InputError);
  EXPECT_THROW(majority_vote(std::vector<Label>{}, TieRule::abstain()), InputError);
}

TEST(TieRule, Parse) {
  EXPECT_EQ(TieRule::parse("abstain").kind, TieRule::Kind::abstain);
  EXPECT_EQ(TieRule::parse("error").kind, TieRule::Kind::error);
  const auto p = TieRule::parse("prefer:tie");
  EXPECT_EQ(p.kind, TieRule::Kind::prefer_label);
  EXPECT_EQ(p.preferred, "tie");
  EXPECT_THROW(TieRule::parse("coin"), InputError);
}

TEST(Accuracy, ExcludesMissingPredictions) {
  const std::vector<MaybeLabel> pred{"1", std::nullopt, "0", "0"};
  const std::vector<Label> gold{"1", "1", "1", "0"};
  const auto a = accuracy(pred, gold);
  EXPECT_DOUBLE_EQ(a.value, 2.0 / 3.0);
  EXPECT_EQ(a.scored, 3u);
  EXPECT_EQ(a.excluded, 1u);
  EXPECT_THROW(accuracy(pred, std::vector<Label>{"1"}), InputError);
}

TEST(BalancedAccuracy, BinaryFormula) {
  // recall(1) = 8/10, recall(0) = 45/90
  const auto c = ConfusionCounts::binary(8, 45, 45, 2);
  EXPECT_DOUBLE_EQ(balanced_accuracy(c), (0.8 + 0.5) / 2.0);
}

TEST(BalancedAccuracy, ZeroSupportClassNamesTheClass) {
  const auto c = ConfusionCounts::binary(0, 3, 5, 0);
  try {
    balanced_accuracy(c);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("'1'"), std::string::npos);
  }
}

TEST(BalancedAccuracy, PredictionsOutsideClassesCountAgainstRecall) {
  const std::vector<MaybeLabel> pred{"a", "zzz", "b", std::nullopt};
  const std::vector<Label> gold{"a", "a", "b", "b"};
  const auto c = ConfusionCounts::from_labels(pred, gold, {"a", "b"});
  EXPECT_EQ(c.excluded(), 1u);
  EXPECT_EQ(c.support(0), 2u);
  EXPECT_EQ(c.support(1), 1u);
  EXPECT_DOUBLE_EQ(balanced_accuracy(c), (0.5 + 1.0) / 2.0);
}

TEST(ChanceAgreement, SkewedAndUniformMarginals) {
  const std::vector<double> skewed{0.95, 0.05};
  EXPECT_EQ(chance_agreement(skewed), 0.905);
  const std::vector<double> three{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_EQ(chance_agreement(three), 1.0 / 3.0);
  const std::vector<double> off{0.5, 0.6};
  EXPECT_THROW(chance_agreement(off), InputError);
  const std::vector<double> negative{1.5, -0.5};
  EXPECT_THROW(chance_agreement(negative), InputError);
}

TEST(Consensus, MajorityBeatsEveryRunWhenErrorsAreDisjoint) {
  const std::vector<GoldLabel> gold{{"t1", "1"}, {"t2", "0"}, {"t3", "1"}, {"t4", "0"}};
  const std::vector<JudgeRun> runs{
      make_run(0, {{"t1", "0"}, {"t2", "0"}, {"t3", "1"}, {"t4", "0"}}),
      make_run(1, {{"t1", "1"}, {"t2", "1"}, {"t3", "1"}, {"t4", "0"}}),
      make_run(2, {{"t1", "1"}, {"t2", "0"}, {"t3", "0"}, {"t4", "0"}}),
  };
  const auto s = per_run_vs_consensus(runs, gold);
  ASSERT_EQ(s.per_run.size(), 3u);
  for (double x : s.per_run) EXPECT_LT(x, s.majority);
  EXPECT_EQ(s.majority, 1.0);
  EXPECT_DOUBLE_EQ(s.mean, 0.75);
  EXPECT_DOUBLE_EQ(s.stddev, 0.0);
  EXPECT_FALSE(s.no_sampling);
}

TEST(Consensus, NoSamplingRunIsScoredSeparately) {
  const std::vector<GoldLabel> gold{{"t1", "1"}, {"t2", "0"}, {"t3", "0"}};
  const std::vector<JudgeRun> runs{make_run(0, {{"t1", "1"}, {"t2", "0"}, {"t3", "0"}}),
                                   make_run(1, {{"t1", "1"}, {"t2", "1"}, {"t3", "0"}})};
  const auto ns = make_run(0, {{"t1", "0"}, {"t2", "0"}, {"t3", "0"}}, false);
  const auto s = per_run_vs_consensus(runs, gold, TieRule::abstain(), &ns);
  ASSERT_TRUE(s.no_sampling);
  EXPECT_DOUBLE_EQ(*s.no_sampling, 0.5);
  EXPECT_DOUBLE_EQ(s.stddev, std::sqrt(0.03125));
  EXPECT_EQ(s.majority_abstained, 1u);
  EXPECT_DOUBLE_EQ(s.majority, 1.0);
  const auto j = s.to_json();
  EXPECT_TRUE(j.contains("single_run"));
}

TEST(Consensus, RunsMustCoverGold) {
  const std::vector<GoldLabel> gold{{"t1", "1"}, {"t2", "0"}};
  const std::vector<JudgeRun> runs{make_run(0, {{"t1", "1"}}), make_run(1, {{"t1", "1"}})};
  EXPECT_THROW(per_run_vs_consensus(runs, gold), InputError);
  EXPECT_THROW(per_run_vs_consensus(std::vector<JudgeRun>{runs[0]}, gold), InputError);
}

TEST(Consensus, LabelsSkipMissingVotes) {
  const std::vector<JudgeRun> runs{make_run(0, {{"t1", std::nullopt}}), make_run(1, {{"t1", "x"}}),
                                   make_run(2, {{"t1", std::nullopt}})};
  const std::vector<std::string> ids{"t1"};
  EXPECT_EQ(consensus_labels(runs, ids, TieRule::abstain())[0], "x");
}

TEST(ChanceAgreement, ShortDecimalsSumExactly) {
  const std::vector<double> a{0.1, 0.2, 0.7};
  EXPECT_EQ(chance_agreement(a), 0.54);
  const std::vector<double> b{0.25, 0.75};
  EXPECT_EQ(chance_agreement(b), 0.625);
  const std::vector<double> c{1e-5, 1 - 1e-5};
  EXPECT_EQ(chance_agreement(c), 0.9999800002);
  const std::vector<double> d{1.0};
  EXPECT_EQ(chance_agreement(d), 1.0);
}
