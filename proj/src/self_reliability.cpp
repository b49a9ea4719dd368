#include "raterel/self_reliability.hpp"

#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "raterel/error.hpp"

namespace raterel {

nlohmann::json RunRecord::to_json() const {
  nlohmann::json j;
  j["task_id"] = task_id;
  j["raw_response"] = raw_response;
  j["parsed_label"] = parsed_label ? nlohmann::json(*parsed_label) : nlohmann::json(nullptr);
  j["parse_error"] = parse_error ? nlohmann::json(*parse_error) : nlohmann::json(nullptr);
  j["prompt_hash"] = prompt_hash;
  j["latency_ms"] = latency_ms;
  j["attempt_count"] = attempt_count;
  return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
  RunRecord r;
  r.task_id = j.at("task_id").get<std::string>();
  r.raw_response = j.value("raw_response", "");
  if (j.contains("parsed_label") && !j["parsed_label"].is_null()) {
    r.parsed_label = j["parsed_label"].get<std::string>();
  }
  if (j.contains("parse_error") && !j["parse_error"].is_null()) {
    r.parse_error = j["parse_error"].get<std::string>();
  }
  if (r.parsed_label.has_value() == r.parse_error.has_value()) {
    throw InputError(fmt::format("record for task '{}' must carry exactly one of parsed_label and "
                                 "parse_error", r.task_id));
  }
  r.prompt_hash = j.value("prompt_hash", "");
  r.latency_ms = j.value("latency_ms", 0.0);
  r.attempt_count = j.value("attempt_count", 0);
  return r;
}

std::optional<std::string> JudgeRun::label_for(const std::string& task_id) const {
  for (const auto& r : records) {
    if (r.task_id == task_id) return r.parsed_label;
  }
  return std::nullopt;
}

std::string JudgeRun::rater_id() const { return fmt::format("{}/run{}", judge_name, run_index); }

namespace {

void require_same_tasks(std::span<const JudgeRun> runs) {
  const auto& first = runs.front();
  std::unordered_set<std::string> ids;
  for (const auto& r : first.records) ids.insert(r.task_id);
  for (const auto& run : runs.subspan(1)) {
    std::unordered_set<std::string> other;
    for (const auto& r : run.records) other.insert(r.task_id);
    if (other != ids) {
      throw InputError(fmt::format("run {} of '{}' covers a different task set than run {}",
                                   run.run_index, run.judge_name, first.run_index));
    }
  }
}

}  // namespace

RatingMatrix runs_to_matrix(std::span<const JudgeRun> runs, const Scale& scale) {
  if (runs.empty()) throw InputError("no runs given");
  require_same_tasks(runs);
  std::vector<std::string> units;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : runs.front().records) {
    if (index.try_emplace(r.task_id, units.size()).second) units.push_back(r.task_id);
  }
  std::vector<std::string> raters;
  for (const auto& run : runs) raters.push_back(run.rater_id());

  std::vector<std::optional<double>> cells(units.size() * runs.size());
  for (std::size_t c = 0; c < runs.size(); ++c) {
    for (const auto& rec : runs[c].records) {
      if (!rec.parsed_label) continue;
      auto v = scale.canonicalize(std::string_view(*rec.parsed_label));
      if (!v) {
        throw InputError(fmt::format("label '{}' for task '{}' in {} is inadmissible",
                                     *rec.parsed_label, rec.task_id, runs[c].rater_id()));
      }
      cells[index.at(rec.task_id) * runs.size() + c] = *v;
    }
  }
  return RatingMatrix::from_cells(std::move(units), std::move(raters), std::move(cells), scale);
}

AgreementReport self_reliability(std::span<const JudgeRun> runs, const Scale& scale,
                                 ExpectedMode mode) {
  if (runs.size() < 2) {
    throw InputError(fmt::format("self-reliability needs at least 2 runs, got {}", runs.size()));
  }
  return krippendorff_alpha(runs_to_matrix(runs, scale), mode);
}

UnanimityResult unanimity_rate(std::span<const JudgeRun> runs) {
  if (runs.size() < 2) {
    throw InputError(fmt::format("unanimity needs at least 2 runs, got {}", runs.size()));
  }
  require_same_tasks(runs);
  std::vector<std::unordered_map<std::string, const RunRecord*>> by_task(runs.size());
  for (std::size_t c = 0; c < runs.size(); ++c) {
    for (const auto& rec : runs[c].records) by_task[c][rec.task_id] = &rec;
  }
  UnanimityResult result;
  for (const auto& rec : runs.front().records) {
    bool complete = true;
    bool same = true;
    for (std::size_t c = 0; c < runs.size() && complete; ++c) {
      const auto& label = by_task[c].at(rec.task_id)->parsed_label;
      if (!label) {
        complete = false;
      } else if (*label != *by_task[0].at(rec.task_id)->parsed_label) {
        same = false;
      }
    }
    if (!complete) {
      ++result.excluded;
      continue;
    }
    ++result.considered;
    if (same) ++result.unanimous;
  }
  if (result.considered > 0) {
    result.rate = static_cast<double>(result.unanimous) / static_cast<double>(result.considered);
  }
  return result;
}

}  // namespace raterel
