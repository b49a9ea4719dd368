#include "raterel/task.hpp"

#include <fstream>

#include <fmt/format.h>

#include "raterel/error.hpp"

namespace raterel {

std::string_view to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::binary_consistency: return "binary_consistency";
    case TaskKind::likert: return "likert";
    case TaskKind::pairwise_preference: return "pairwise_preference";
  }
  return "unknown";
}

std::string_view to_string(LikertMetric metric) noexcept {
  switch (metric) {
    case LikertMetric::coherence: return "coherence";
    case LikertMetric::consistency: return "consistency";
    case LikertMetric::fluency: return "fluency";
    case LikertMetric::relevance: return "relevance";
  }
  return "unknown";
}

std::string_view to_string(PopulationKind population) noexcept {
  switch (population) {
    case PopulationKind::expert: return "expert";
    case PopulationKind::crowd: return "crowd";
    case PopulationKind::llm_judge: return "llm_judge";
  }
  return "unknown";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "binary_consistency") return TaskKind::binary_consistency;
  if (text == "likert") return TaskKind::likert;
  if (text == "pairwise_preference") return TaskKind::pairwise_preference;
  throw InputError(fmt::format("unknown task kind '{}'", text));
}

LikertMetric parse_likert_metric(std::string_view text) {
  for (LikertMetric m : kLikertMetrics) {
    if (text == to_string(m)) return m;
  }
  throw InputError(fmt::format("unknown Likert metric '{}'", text));
}

PopulationKind parse_population(std::string_view text) {
  if (text == "expert") return PopulationKind::expert;
  if (text == "crowd") return PopulationKind::crowd;
  if (text == "llm_judge") return PopulationKind::llm_judge;
  throw InputError(fmt::format("unknown population '{}'", text));
}

Scale scale_for(TaskKind kind) {
  switch (kind) {
    case TaskKind::binary_consistency: return Scale::nominal({"0", "1"});
    case TaskKind::likert: return Scale::ordinal({"1", "2", "3", "4", "5"});
    case TaskKind::pairwise_preference: return Scale::ordinal({"model_a", "tie", "model_b"});
  }
  throw InputError("unknown task kind");
}

std::string task_group(const Task& task) {
  if (task.kind == TaskKind::likert && task.metric) {
    return fmt::format("likert/{}", to_string(*task.metric));
  }
  return std::string(to_string(task.kind));
}

nlohmann::json Task::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["kind"] = std::string(to_string(kind));
  if (metric) j["metric"] = std::string(to_string(*metric));
  if (!dataset_tag.empty()) j["dataset"] = dataset_tag;
  if (!category.empty()) j["category"] = category;
  if (!document.empty()) j["document"] = document;
  if (!summary.empty()) j["summary"] = summary;
  if (!questions.empty()) j["questions"] = questions;
  if (!answers_a.empty()) j["answers_a"] = answers_a;
  if (!answers_b.empty()) j["answers_b"] = answers_b;
  if (!reference_answers.empty()) j["reference_answers"] = reference_answers;
  auto labels = nlohmann::json::array();
  for (const auto& h : human_labels) {
    labels.push_back({{"rater", h.rater},
                      {"label", h.label},
                      {"population", std::string(to_string(h.population))}});
  }
  j["human_labels"] = std::move(labels);
  return j;
}

Task Task::from_json(const nlohmann::json& j) {
  Task t;
  t.id = j.at("id").get<std::string>();
  t.kind = parse_task_kind(j.at("kind").get<std::string>());
  if (j.contains("metric")) t.metric = parse_likert_metric(j["metric"].get<std::string>());
  t.dataset_tag = j.value("dataset", "");
  t.category = j.value("category", "");
  t.document = j.value("document", "");
  t.summary = j.value("summary", "");
  t.questions = j.value("questions", std::vector<std::string>{});
  t.answers_a = j.value("answers_a", std::vector<std::string>{});
  t.answers_b = j.value("answers_b", std::vector<std::string>{});
  t.reference_answers = j.value("reference_answers", std::vector<std::string>{});
  for (const auto& h : j.value("human_labels", nlohmann::json::array())) {
    t.human_labels.push_back({h.at("rater").get<std::string>(), h.at("label").get<std::string>(),
                              parse_population(h.at("population").get<std::string>())});
  }
  return t;
}

std::vector<Task> read_tasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open task file '{}'", path.string()));
  std::vector<Task> tasks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      tasks.push_back(Task::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return tasks;
}

void write_tasks(const std::filesystem::path& path, std::span<const Task> tasks) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write task file '{}'", path.string()));
  for (const auto& t : tasks) out << t.to_json().dump() << '\n';
}

}  // namespace raterel
