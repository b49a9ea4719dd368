#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/prompts.hpp"

namespace raterel {

enum class SeedPolicy { none, fixed, per_run };

std::string_view to_string(SeedPolicy policy) noexcept;
SeedPolicy parse_seed_policy(std::string_view text);

struct JudgeConfig {
  std::string judge_name;
  std::string endpoint_url;
  std::string model_id;
  // Unset means the model family default.
  std::optional<double> temperature;
  std::optional<double> top_p;
  int n_runs = 3;
  bool sampling_enabled = true;
  PromptVariant prompt_variant = PromptVariant::standard;
  int max_retries = 3;
  double timeout_s = 120.0;
  double backoff_initial_s = 0.5;
  double backoff_max_s = 8.0;
  int parallelism_limit = 4;
  SeedPolicy seed_policy = SeedPolicy::none;
  std::uint64_t seed = 0;
  std::string api_key_env = "RATEREL_API_KEY";
  std::vector<std::string> reasoning_delimiters{"</think>"};

  // Throws ConfigError on the first violated constraint.
  void validate() const;

  // Decoding parameters actually sent. With sampling disabled these are
  // temperature 0 and top_p 1.
  double effective_temperature() const;
  double effective_top_p() const;
  std::optional<std::uint64_t> request_seed(std::size_t run_index) const;

  // SHA-256 over the fields that shape responses (model, decoding, prompt
  // variant, parsing); endpoint, run count and scheduling knobs excluded.
  std::string hash() const;

  nlohmann::json to_json() const;
  static JudgeConfig from_json(const nlohmann::json& j);
  static JudgeConfig load(const std::filesystem::path& path);
};

// 0.6 / 0.95 for Qwen models, 0.6 / 0.9 otherwise.
double default_temperature(std::string_view model_id);
double default_top_p(std::string_view model_id);

}  // namespace raterel
