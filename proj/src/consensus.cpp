#include "raterel/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <map>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "raterel/error.hpp"

namespace raterel {

TieRule TieRule::parse(std::string_view text) {
  if (text == "abstain") return abstain();
  if (text == "error") return error();
  constexpr std::string_view prefix = "prefer:";
  if (text.starts_with(prefix) && text.size() > prefix.size()) {
    return prefer(std::string(text.substr(prefix.size())));
  }
  throw InputError(fmt::format("unknown tie rule '{}' (abstain | error | prefer:<label>)", text));
}

MaybeLabel majority_vote(std::span<const Label> labels, const TieRule& rule) {
  if (labels.empty()) throw InputError("majority vote needs at least one label");
  std::map<Label, std::size_t> tally;
  for (const auto& l : labels) ++tally[l];
  std::size_t best = 0;
  for (const auto& [label, n] : tally) best = std::max(best, n);
  std::vector<Label> top;
  for (const auto& [label, n] : tally) {
    if (n == best) top.push_back(label);
  }
  if (top.size() == 1) return top.front();
  switch (rule.kind) {
    case TieRule::Kind::abstain: return std::nullopt;
    case TieRule::Kind::prefer_label:
      if (std::find(top.begin(), top.end(), rule.preferred) != top.end()) return rule.preferred;
      return std::nullopt;
    case TieRule::Kind::error: break;
  }
  throw InputError(fmt::format("majority vote tied between {}", fmt::join(top, ", ")));
}

AccuracyResult accuracy(std::span<const MaybeLabel> predicted, std::span<const Label> gold) {
  if (predicted.size() != gold.size()) {
    throw InputError(fmt::format("accuracy needs aligned labels, got {} predictions for {} gold",
                                 predicted.size(), gold.size()));
  }
  if (gold.empty()) throw InputError("accuracy over an empty label set");
  AccuracyResult r;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!predicted[i]) {
      ++r.excluded;
      continue;
    }
    ++r.scored;
    if (*predicted[i] == gold[i]) ++hits;
  }
  if (r.scored == 0) throw InputError("accuracy undefined: every prediction is missing");
  r.value = static_cast<double>(hits) / static_cast<double>(r.scored);
  return r;
}

double accuracy(std::span<const Label> predicted, std::span<const Label> gold) {
  std::vector<MaybeLabel> maybe(predicted.begin(), predicted.end());
  return accuracy(maybe, gold).value;
}

ConfusionCounts ConfusionCounts::binary(std::size_t tp, std::size_t fp, std::size_t tn,
                                        std::size_t fn) {
  ConfusionCounts c;
  c.classes_ = {"1", "0"};
  c.cells_ = {tp, fn, 0, fp, tn, 0};
  return c;
}

ConfusionCounts ConfusionCounts::from_labels(std::span<const MaybeLabel> predicted,
                                             std::span<const Label> gold,
                                             std::vector<Label> classes) {
  if (predicted.size() != gold.size()) {
    throw InputError(fmt::format("confusion counts need aligned labels, got {} predictions for {} "
                                 "gold", predicted.size(), gold.size()));
  }
  ConfusionCounts c;
  c.classes_ = std::move(classes);
  const std::size_t k = c.classes_.size();
  c.cells_.assign(k * (k + 1), 0);
  auto index_of = [&](const Label& l) {
    return static_cast<std::size_t>(std::find(c.classes_.begin(), c.classes_.end(), l) -
                                    c.classes_.begin());
  };
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::size_t g = index_of(gold[i]);
    if (g == k) throw InputError(fmt::format("gold label '{}' is not a declared class", gold[i]));
    if (!predicted[i]) {
      ++c.excluded_;
      continue;
    }
    ++c.cells_[g * (k + 1) + index_of(*predicted[i])];
  }
  return c;
}

std::size_t ConfusionCounts::count(std::size_t gold_class, std::size_t predicted_class) const {
  return cells_.at(gold_class * (classes_.size() + 1) + predicted_class);
}

std::size_t ConfusionCounts::support(std::size_t gold_class) const {
  const std::size_t w = classes_.size() + 1;
  return std::accumulate(cells_.begin() + static_cast<std::ptrdiff_t>(gold_class * w),
                         cells_.begin() + static_cast<std::ptrdiff_t>((gold_class + 1) * w),
                         std::size_t{0});
}

std::size_t ConfusionCounts::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::size_t{0});
}

double balanced_accuracy(const ConfusionCounts& counts) {
  const auto classes = counts.classes();
  if (classes.empty()) throw InputError("balanced accuracy needs at least one class");
  double recall_sum = 0.0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::size_t n = counts.support(i);
    if (n == 0) {
      throw InputError(fmt::format("balanced accuracy undefined: class '{}' has no gold items",
                                   classes[i]));
    }
    recall_sum += static_cast<double>(counts.count(i, i)) / static_cast<double>(n);
  }
  return recall_sum / static_cast<double>(classes.size());
}

namespace {

__extension__ using u128 = unsigned __int128;

// p as digits * 10^-scale when its shortest round-trip form has at most 15
// significant digits and scale <= 17.
std::optional<std::pair<std::uint64_t, int>> short_decimal(double p) {
  const std::string text = fmt::format("{}", p);
  std::uint64_t digits = 0;
  int significant = 0;
  int scale = 0;
  bool after_point = false;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != 'e'; ++i) {
    const char c = text[i];
    if (c == '.') {
      after_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    if (digits != 0 || c != '0') ++significant;
    digits = digits * 10 + static_cast<std::uint64_t>(c - '0');
    if (after_point) ++scale;
  }
  if (i < text.size()) scale -= std::stoi(text.substr(i + 1));
  for (; scale < 0; ++scale) digits *= 10;
  if (significant > 15 || scale > 17) return std::nullopt;
  return std::pair{digits, scale};
}

std::string to_decimal_string(u128 n) {
  if (n == 0) return "0";
  std::string s;
  for (; n > 0; n /= 10) s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(n % 10)));
  return s;
}

// Exact sum of squares of short decimals, rounded once to double.
std::optional<double> exact_square_sum(std::span<const double> marginals) {
  std::vector<std::pair<std::uint64_t, int>> parts;
  int scale = 0;
  for (double p : marginals) {
    auto d = short_decimal(p);
    if (!d) return std::nullopt;
    scale = std::max(scale, d->second);
    parts.push_back(*d);
  }
  u128 total = 0;
  for (auto [digits, s] : parts) {
    u128 v = digits;
    for (int k = s; k < scale; ++k) v *= 10;
    total += v * v;
  }
  const std::string text = fmt::format("{}e-{}", to_decimal_string(total), 2 * scale);
  return std::strtod(text.c_str(), nullptr);
}

}  // namespace

double chance_agreement(std::span<const double> marginals) {
  if (marginals.empty()) throw InputError("chance agreement needs a non-empty marginal vector");
  double sum = 0.0;
  double squares = 0.0;
  for (double p : marginals) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError(fmt::format("marginal {} lies outside [0, 1]", p));
    }
    sum += p;
    squares += p * p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw InputError(fmt::format("marginals sum to {}, not 1", sum));
  }
  return exact_square_sum(marginals).value_or(squares);
}

nlohmann::json ConsensusSummary::to_json() const {
  nlohmann::json j;
  j["classes"] = classes;
  j["single_run"] = {{"per_run", per_run}, {"mean", mean}, {"std", stddev}};
  j["majority"] = majority;
  j["majority_abstained"] = majority_abstained;
  j["no_sampling"] = no_sampling ? nlohmann::json(*no_sampling) : nlohmann::json(nullptr);
  return j;
}

namespace {

std::unordered_map<std::string, const RunRecord*> index_records(const JudgeRun& run) {
  std::unordered_map<std::string, const RunRecord*> out;
  for (const auto& r : run.records) out[r.task_id] = &r;
  return out;
}

std::vector<MaybeLabel> aligned_labels(const JudgeRun& run, std::span<const GoldLabel> gold) {
  const auto index = index_records(run);
  if (index.size() != gold.size()) {
    throw InputError(fmt::format("{} has {} tasks but gold covers {}", run.rater_id(),
                                 index.size(), gold.size()));
  }
  std::vector<MaybeLabel> out;
  out.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = index.find(g.task_id);
    if (it == index.end()) {
      throw InputError(fmt::format("{} has no record for gold task '{}'", run.rater_id(), g.task_id));
    }
    out.push_back(it->second->parsed_label);
  }
  return out;
}

}  // namespace

std::vector<MaybeLabel> consensus_labels(std::span<const JudgeRun> runs,
                                         std::span<const std::string> task_ids,
                                         const TieRule& rule) {
  std::vector<std::unordered_map<std::string, const RunRecord*>> indices;
  for (const auto& run : runs) indices.push_back(index_records(run));
  std::vector<MaybeLabel> out;
  out.reserve(task_ids.size());
  std::vector<Label> votes;
  for (const auto& id : task_ids) {
    votes.clear();
    for (const auto& index : indices) {
      auto it = index.find(id);
      if (it != index.end() && it->second->parsed_label) votes.push_back(*it->second->parsed_label);
    }
    out.push_back(votes.empty() ? std::nullopt : majority_vote(votes, rule));
  }
  return out;
}

ConsensusSummary per_run_vs_consensus(std::span<const JudgeRun> runs,
                                      std::span<const GoldLabel> gold, const TieRule& rule,
                                      const JudgeRun* no_sampling) {
  if (runs.size() < 2) {
    throw InputError(fmt::format("consensus comparison needs at least 2 runs, got {}", runs.size()));
  }
  std::vector<Label> gold_labels;
  std::vector<std::string> task_ids;
  for (const auto& g : gold) {
    gold_labels.push_back(g.label);
    task_ids.push_back(g.task_id);
  }
  ConsensusSummary s;
  s.classes = gold_labels;
  std::sort(s.classes.begin(), s.classes.end());
  s.classes.erase(std::unique(s.classes.begin(), s.classes.end()), s.classes.end());

  for (const auto& run : runs) {
    const auto predicted = aligned_labels(run, gold);
    s.per_run.push_back(
        balanced_accuracy(ConfusionCounts::from_labels(predicted, gold_labels, s.classes)));
  }
  const double n = static_cast<double>(s.per_run.size());
  s.mean = std::accumulate(s.per_run.begin(), s.per_run.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : s.per_run) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / (n - 1.0));

  const auto majority = consensus_labels(runs, task_ids, rule);
  const auto majority_counts = ConfusionCounts::from_labels(majority, gold_labels, s.classes);
  s.majority = balanced_accuracy(majority_counts);
  s.majority_abstained = majority_counts.excluded();

  if (no_sampling) {
    const auto predicted = aligned_labels(*no_sampling, gold);
    s.no_sampling =
        balanced_accuracy(ConfusionCounts::from_labels(predicted, gold_labels, s.classes));
  }
  return s;
}

}  // namespace raterel
