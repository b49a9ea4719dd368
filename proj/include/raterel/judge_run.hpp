#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace raterel {

// One judge response to one task within one run. Exactly one of
// parsed_label / parse_error is set.
struct RunRecord {
  std::string task_id;
  std::string raw_response;
  std::optional<std::string> parsed_label;
  std::optional<std::string> parse_error;
  std::string prompt_hash;
  double latency_ms = 0.0;
  int attempt_count = 0;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

// One judge's pass over a task list.
struct JudgeRun {
  std::string judge_name;
  std::size_t run_index = 0;
  std::string config_hash;
  bool sampling_enabled = true;
  std::vector<RunRecord> records;

  // Label for a task id, or nullopt if missing or unparsed.
  std::optional<std::string> label_for(const std::string& task_id) const;
  std::string rater_id() const;
};

}  // namespace raterel
