#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/scale.hpp"

namespace raterel {

enum class TaskKind { binary_consistency, likert, pairwise_preference };
enum class LikertMetric { coherence, consistency, fluency, relevance };
enum class PopulationKind { expert, crowd, llm_judge };

inline constexpr LikertMetric kLikertMetrics[] = {LikertMetric::coherence,
                                                  LikertMetric::consistency,
                                                  LikertMetric::fluency, LikertMetric::relevance};

std::string_view to_string(TaskKind kind) noexcept;
std::string_view to_string(LikertMetric metric) noexcept;
std::string_view to_string(PopulationKind population) noexcept;
TaskKind parse_task_kind(std::string_view text);
LikertMetric parse_likert_metric(std::string_view text);
PopulationKind parse_population(std::string_view text);

struct HumanLabel {
  std::string rater;
  std::string label;
  PopulationKind population = PopulationKind::expert;

  friend bool operator==(const HumanLabel&, const HumanLabel&) = default;
};

// One benchmark item to be judged.
struct Task {
  std::string id;
  TaskKind kind = TaskKind::binary_consistency;
  std::optional<LikertMetric> metric;  // likert only
  std::string dataset_tag;
  std::string category;  // pairwise only: "math" or "general"
  std::string document;
  std::string summary;
  // Pairwise only: two-turn conversation shared by both assistants.
  std::vector<std::string> questions;
  std::vector<std::string> answers_a;
  std::vector<std::string> answers_b;
  std::vector<std::string> reference_answers;  // empty unless category == "math"
  std::vector<HumanLabel> human_labels;

  nlohmann::json to_json() const;
  static Task from_json(const nlohmann::json& j);

  friend bool operator==(const Task&, const Task&) = default;
};

// Label scale of a task kind: binary {0, 1} nominal, Likert 1-5 ordinal,
// pairwise {model_a, tie, model_b} ordinal with tie in the middle.
Scale scale_for(TaskKind kind);

// Grouping key for reports: the kind, plus the metric for Likert tasks
// (e.g. "likert/coherence").
std::string task_group(const Task& task);

std::vector<Task> read_tasks(const std::filesystem::path& path);
void write_tasks(const std::filesystem::path& path, std::span<const Task> tasks);

}  // namespace raterel
