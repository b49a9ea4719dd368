#include "raterel/adapters.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "raterel/consensus.hpp"
#include "raterel/error.hpp"

namespace raterel {

nlohmann::json LoadManifest::to_json() const {
  nlohmann::json j;
  j["benchmark"] = benchmark;
  j["source"] = source;
  j["rows_read"] = rows_read;
  j["tasks"] = tasks;
  auto rej = nlohmann::json::array();
  for (const auto& r : rejected) rej.push_back({{"line", r.line}, {"reason", r.reason}});
  j["rejected"] = std::move(rej);
  j["warnings"] = warnings;
  if (!per_dataset.empty()) j["per_dataset"] = per_dataset;
  if (benchmark == "mtbench") {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [k, v] : by_human_count) counts[std::to_string(k)] = v;
    j["by_human_count"] = std::move(counts);
    j["dropped"] = dropped;
    j["min_human_ratings"] = min_human_ratings;
  }
  return j;
}

std::span<const std::string> summac_datasets() {
  static const std::vector<std::string> tags = {"CoGenSumm", "XSumFaith", "Polytope",
                                                "FactCC",    "SummEval",  "FRANK"};
  return tags;
}

namespace {

// Thrown inside row parsers; becomes a RowRejection for that line.
struct RowError {
  std::string reason;
};

template <class RowFn>
void for_each_row(std::istream& in, LoadManifest& manifest, RowFn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++manifest.rows_read;
    try {
      const auto row = nlohmann::json::parse(line);
      if (!row.is_object()) throw RowError{"row is not a JSON object"};
      fn(row);
    } catch (const RowError& e) {
      manifest.rejected.push_back({line_no, e.reason});
    } catch (const nlohmann::json::exception& e) {
      manifest.rejected.push_back({line_no, fmt::format("malformed JSON: {}", e.what())});
    }
  }
  if (manifest.rows_read == 0) manifest.warnings.push_back("input contains no rows");
}

std::string require_string(const nlohmann::json& row, const char* key) {
  if (!row.contains(key)) throw RowError{fmt::format("missing field '{}'", key)};
  const auto& v = row[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw RowError{fmt::format("field '{}' must be a string", key)};
}

std::vector<std::string> require_turns(const nlohmann::json& row, const char* key) {
  if (!row.contains(key) || !row[key].is_array()) {
    throw RowError{fmt::format("malformed conversation: '{}' must be an array of 2 turns", key)};
  }
  const auto& arr = row[key];
  if (arr.size() != 2) {
    throw RowError{fmt::format("malformed conversation: '{}' has {} turns, expected 2", key,
                               arr.size())};
  }
  std::vector<std::string> out;
  for (const auto& t : arr) {
    if (!t.is_string()) throw RowError{fmt::format("malformed conversation: '{}' turn is not text", key)};
    out.push_back(t.get<std::string>());
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

std::string likert_score(const nlohmann::json& annotation, LikertMetric metric) {
  const auto key = std::string(to_string(metric));
  if (!annotation.contains(key)) throw RowError{fmt::format("annotation lacks '{}'", key)};
  const auto& v = annotation[key];
  if (!v.is_number()) throw RowError{fmt::format("{} score is not a number", key)};
  const double x = v.get<double>();
  if (std::floor(x) != x || x < 1 || x > 5) {
    throw RowError{fmt::format("{} score {} outside 1-5", key, v.dump())};
  }
  return std::to_string(static_cast<int>(x));
}

std::string normalize_winner(const nlohmann::json& v) {
  if (!v.is_string()) throw RowError{"vote winner is not a string"};
  const auto w = v.get<std::string>();
  if (w == "model_a" || w == "model_b" || w == "tie") return w;
  if (w.starts_with("tie")) return "tie";
  throw RowError{fmt::format("unknown vote winner '{}'", w)};
}

}  // namespace

LoadResult load_summac(std::istream& in, const std::string& source) {
  LoadResult result;
  result.manifest.benchmark = "summac";
  result.manifest.source = source;
  const auto known = summac_datasets();
  std::unordered_set<std::string> warned;
  std::unordered_set<std::string> ids;

  for_each_row(in, result.manifest, [&](const nlohmann::json& row) {
    Task t;
    t.id = require_string(row, "id");
    t.kind = TaskKind::binary_consistency;
    t.dataset_tag = require_string(row, "dataset");
    t.document = require_string(row, "document");
    t.summary = require_string(row, "summary");
    if (!row.contains("label")) throw RowError{"missing field 'label'"};
    const auto& label = row["label"];
    if (!label.is_number_integer() || (label.get<long long>() != 0 && label.get<long long>() != 1)) {
      throw RowError{fmt::format("label {} is not 0 or 1", label.dump())};
    }
    if (!ids.insert(t.id).second) throw RowError{fmt::format("duplicate id '{}'", t.id)};
    if (std::find(known.begin(), known.end(), t.dataset_tag) == known.end() &&
        warned.insert(t.dataset_tag).second) {
      result.manifest.warnings.push_back(fmt::format("unknown dataset tag '{}'", t.dataset_tag));
    }
    t.human_labels.push_back(
        {"summac_gold", std::to_string(label.get<long long>()), PopulationKind::expert});
    ++result.manifest.per_dataset[t.dataset_tag];
    result.tasks.push_back(std::move(t));
  });
  result.manifest.tasks = result.tasks.size();
  return result;
}

LoadResult load_summac(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_summac(in, path.string());
}

LoadResult load_summeval(std::istream& in, const std::string& source) {
  LoadResult result;
  result.manifest.benchmark = "summeval";
  result.manifest.source = source;
  std::unordered_set<std::string> ids;

  for_each_row(in, result.manifest, [&](const nlohmann::json& row) {
    const std::string id = require_string(row, "id");
    const std::string document = require_string(row, "document");
    const std::string summary = require_string(row, "summary");

    struct Group {
      const char* key;
      const char* prefix;
      PopulationKind population;
    };
    const Group groups[] = {{"expert_annotations", "expert", PopulationKind::expert},
                            {"turker_annotations", "turker", PopulationKind::crowd}};

    std::vector<Task> produced;
    for (LikertMetric metric : kLikertMetrics) {
      Task t;
      t.id = fmt::format("{}:{}", id, to_string(metric));
      t.kind = TaskKind::likert;
      t.metric = metric;
      t.dataset_tag = "SummEval";
      t.document = document;
      t.summary = summary;
      for (const auto& g : groups) {
        if (!row.contains(g.key) || row[g.key].is_null()) continue;
        if (!row[g.key].is_array()) throw RowError{fmt::format("'{}' must be an array", g.key)};
        std::size_t i = 0;
        for (const auto& annotation : row[g.key]) {
          ++i;
          if (!annotation.is_object()) throw RowError{fmt::format("'{}' entry is not an object", g.key)};
          t.human_labels.push_back({fmt::format("{}_{}", g.prefix, i),
                                    likert_score(annotation, metric), g.population});
        }
      }
      produced.push_back(std::move(t));
    }
    if (!ids.insert(id).second) throw RowError{fmt::format("duplicate id '{}'", id)};
    for (auto& t : produced) result.tasks.push_back(std::move(t));
  });
  result.manifest.tasks = result.tasks.size();
  return result;
}

LoadResult load_summeval(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_summeval(in, path.string());
}

LoadResult load_mtbench(std::istream& in, std::size_t min_human_ratings, const std::string& source) {
  LoadResult result;
  result.manifest.benchmark = "mtbench";
  result.manifest.source = source;
  result.manifest.min_human_ratings = min_human_ratings;
  std::unordered_set<std::string> ids;

  for_each_row(in, result.manifest, [&](const nlohmann::json& row) {
    Task t;
    t.id = require_string(row, "id");
    t.kind = TaskKind::pairwise_preference;
    t.dataset_tag = "MT-Bench";
    t.category = row.value("category", "general") == "math" ? "math" : "general";
    t.questions = require_turns(row, "questions");
    t.answers_a = require_turns(row, "answers_a");
    t.answers_b = require_turns(row, "answers_b");
    if (row.contains("reference_answers") && !row["reference_answers"].is_null()) {
      t.reference_answers = require_turns(row, "reference_answers");
    }
    if (t.category == "math" && t.reference_answers.empty()) {
      throw RowError{"malformed conversation: math item without reference answers"};
    }
    if (!row.contains("human_votes") || !row["human_votes"].is_array()) {
      throw RowError{"missing 'human_votes' array"};
    }
    std::unordered_set<std::string> judges;
    for (const auto& vote : row["human_votes"]) {
      if (!vote.is_object()) throw RowError{"vote is not an object"};
      const std::string judge = require_string(vote, "judge");
      if (!judges.insert(judge).second) {
        throw RowError{fmt::format("judge '{}' votes twice on one item", judge)};
      }
      if (!vote.contains("winner")) throw RowError{"vote lacks 'winner'"};
      t.human_labels.push_back({judge, normalize_winner(vote["winner"]), PopulationKind::crowd});
    }
    if (!ids.insert(t.id).second) throw RowError{fmt::format("duplicate id '{}'", t.id)};
    if (t.human_labels.size() < min_human_ratings) {
      ++result.manifest.dropped;
      return;
    }
    ++result.manifest.by_human_count[t.human_labels.size()];
    result.tasks.push_back(std::move(t));
  });
  result.manifest.tasks = result.tasks.size();
  return result;
}

LoadResult load_mtbench(const std::filesystem::path& path, std::size_t min_human_ratings) {
  auto in = open_input(path);
  return load_mtbench(in, min_human_ratings, path.string());
}

RatingMatrix human_reference(std::span<const Task> tasks, PopulationKind population) {
  if (tasks.empty()) throw InputError("no tasks given");
  const TaskKind kind = tasks.front().kind;
  const auto metric = tasks.front().metric;
  std::vector<Rating> records;
  for (const auto& t : tasks) {
    if (t.kind != kind || t.metric != metric) {
      throw InputError(fmt::format("task '{}' is {}, expected {}", t.id, task_group(t),
                                   task_group(tasks.front())));
    }
    for (const auto& h : t.human_labels) {
      if (h.population == population) records.push_back({t.id, h.rater, h.label});
    }
  }
  if (records.empty()) {
    throw InputError(fmt::format("population '{}' is absent from the tasks", to_string(population)));
  }
  return RatingMatrix::build(records, scale_for(kind));
}

CrossPopulation combine_populations(const RatingMatrix& first, const RatingMatrix& second) {
  if (!(first.scale() == second.scale())) throw InputError("populations use different scales");
  std::vector<std::string> units(first.units().begin(), first.units().end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < units.size(); ++i) index.emplace(units[i], i);
  for (const auto& u : second.units()) {
    if (index.try_emplace(u, units.size()).second) units.push_back(u);
  }
  std::vector<std::string> raters(first.raters().begin(), first.raters().end());
  std::vector<int> groups(first.rater_count(), 0);
  for (const auto& r : second.raters()) {
    if (std::find(raters.begin(), raters.end(), r) != raters.end()) {
      throw InputError(fmt::format("rater '{}' appears in both populations", r));
    }
    raters.push_back(r);
    groups.push_back(1);
  }
  std::vector<std::optional<double>> cells(units.size() * raters.size());
  auto place = [&](const RatingMatrix& m, std::size_t rater_offset) {
    for (std::size_t u = 0; u < m.unit_count(); ++u) {
      const std::size_t row = index.at(m.units()[u]);
      for (std::size_t r = 0; r < m.rater_count(); ++r) {
        cells[row * raters.size() + rater_offset + r] = m.cell(u, r);
      }
    }
  };
  place(first, 0);
  place(second, first.rater_count());
  return {RatingMatrix::from_cells(std::move(units), std::move(raters), std::move(cells),
                                   first.scale()),
          std::move(groups)};
}

GoldDecision gold_label(const Task& task) {
  if (task.human_labels.empty()) {
    throw InputError(fmt::format("task '{}' has no human labels", task.id));
  }
  if (task.kind != TaskKind::pairwise_preference) {
    if (task.human_labels.size() != 1) {
      throw InputError(fmt::format("task '{}' has {} human labels; gold needs exactly one",
                                   task.id, task.human_labels.size()));
    }
    return {task.human_labels.front().label, false};
  }
  std::vector<Label> votes;
  for (const auto& h : task.human_labels) votes.push_back(h.label);
  if (auto winner = majority_vote(votes, TieRule::abstain())) return {*winner, false};
  return {"tie", true};
}

}  // namespace raterel
