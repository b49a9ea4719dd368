#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/judge_run.hpp"

namespace raterel {

using Label = std::string;
using MaybeLabel = std::optional<Label>;

// What majority_vote does when the top count is shared.
struct TieRule {
  enum class Kind { abstain, prefer_label, error };
  Kind kind = Kind::abstain;
  Label preferred;  // prefer_label only

  static TieRule abstain() { return {Kind::abstain, {}}; }
  static TieRule prefer(Label label) { return {Kind::prefer_label, std::move(label)}; }
  static TieRule error() { return {Kind::error, {}}; }
  // "abstain", "error" or "prefer:<label>".
  static TieRule parse(std::string_view text);
};

// Strict-plurality label; nullopt means abstain. With prefer_label the
// preferred label wins only if it is among the tied labels, otherwise the
// vote abstains. Throws InputError on an empty input or on a tie under
// TieRule::error.
MaybeLabel majority_vote(std::span<const Label> labels, const TieRule& rule);

struct AccuracyResult {
  double value = 0.0;
  std::size_t scored = 0;
  std::size_t excluded = 0;  // abstained / missing predictions
};

// Exact-match rate; missing predictions are excluded from the denominator.
AccuracyResult accuracy(std::span<const MaybeLabel> predicted, std::span<const Label> gold);
double accuracy(std::span<const Label> predicted, std::span<const Label> gold);

// Gold class x predicted class counts. Predictions outside `classes` land
// in a per-row "other" bucket; they count against recall.
class ConfusionCounts {
 public:
  // Binary counts with classes {"1", "0"} (positive first).
  static ConfusionCounts binary(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
  static ConfusionCounts from_labels(std::span<const MaybeLabel> predicted,
                                     std::span<const Label> gold, std::vector<Label> classes);

  std::span<const Label> classes() const noexcept { return classes_; }
  std::size_t count(std::size_t gold_class, std::size_t predicted_class) const;
  std::size_t support(std::size_t gold_class) const;
  std::size_t total() const;
  std::size_t excluded() const noexcept { return excluded_; }

 private:
  std::vector<Label> classes_;
  std::vector<std::size_t> cells_;  // row-major, K x (K + 1); last column = other
  std::size_t excluded_ = 0;
};

// Mean of per-class recalls; for two classes (tp/(tp+fn) + tn/(tn+fp)) / 2.
// Throws InputError naming any class with no gold support.
double balanced_accuracy(const ConfusionCounts& counts);

// sum_v p_v^2: probability that two independent raters with these marginals
// coincide. Marginals with short decimal forms (e.g. 0.95) are squared and
// summed exactly as decimals, then rounded once. Throws InputError unless the
// marginals lie on the simplex (1e-9).
double chance_agreement(std::span<const double> marginals);

struct GoldLabel {
  std::string task_id;
  Label label;
};

// Table-shaped comparison of single runs against their majority consensus.
struct ConsensusSummary {
  std::vector<Label> classes;
  std::vector<double> per_run;      // balanced accuracy of each run
  double mean = 0.0;
  double stddev = 0.0;              // sample (n - 1) standard deviation
  double majority = 0.0;
  std::size_t majority_abstained = 0;
  std::optional<double> no_sampling;

  nlohmann::json to_json() const;
};

ConsensusSummary per_run_vs_consensus(std::span<const JudgeRun> runs,
                                      std::span<const GoldLabel> gold,
                                      const TieRule& rule = TieRule::abstain(),
                                      const JudgeRun* no_sampling = nullptr);

// Per-task majority across runs, in the order of `task_ids`.
std::vector<MaybeLabel> consensus_labels(std::span<const JudgeRun> runs,
                                         std::span<const std::string> task_ids,
                                         const TieRule& rule);

}  // namespace raterel
