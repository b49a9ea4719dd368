#include "raterel/judge_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "raterel/error.hpp"
#include "raterel/hashing.hpp"
#include "raterel/parsers.hpp"

namespace raterel {

std::string_view to_string(SeedPolicy policy) noexcept {
  switch (policy) {
    case SeedPolicy::none: return "none";
    case SeedPolicy::fixed: return "fixed";
    case SeedPolicy::per_run: return "per_run";
  }
  return "unknown";
}

SeedPolicy parse_seed_policy(std::string_view text) {
  if (text == "none") return SeedPolicy::none;
  if (text == "fixed") return SeedPolicy::fixed;
  if (text == "per_run") return SeedPolicy::per_run;
  throw ConfigError(fmt::format("unknown seed_policy '{}'", text));
}

namespace {

bool is_qwen(std::string_view model_id) {
  std::string lower(model_id);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.find("qwen") != std::string::npos;
}

}  // namespace

double default_temperature(std::string_view) { return 0.6; }
double default_top_p(std::string_view model_id) { return is_qwen(model_id) ? 0.95 : 0.9; }

void JudgeConfig::validate() const {
  if (judge_name.empty()) throw ConfigError("judge_name is empty");
  if (judge_name.find_first_of("/\\") != std::string::npos || judge_name == "." ||
      judge_name == "..") {
    throw ConfigError(fmt::format("judge_name '{}' is not a valid directory name", judge_name));
  }
  if (endpoint_url.empty()) throw ConfigError("endpoint_url is empty");
  if (model_id.empty()) throw ConfigError("model_id is empty");
  if (temperature && !(std::isfinite(*temperature) && *temperature >= 0.0)) {
    throw ConfigError(fmt::format("temperature {} must be >= 0", *temperature));
  }
  if (top_p && !(*top_p > 0.0 && *top_p <= 1.0)) {
    throw ConfigError(fmt::format("top_p {} must lie in (0, 1]", *top_p));
  }
  if (n_runs < 1) throw ConfigError(fmt::format("n_runs {} must be >= 1", n_runs));
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (!(timeout_s > 0.0)) throw ConfigError("timeout must be > 0");
  if (backoff_initial_s < 0.0 || backoff_max_s < backoff_initial_s) {
    throw ConfigError("backoff must satisfy 0 <= initial <= max");
  }
  if (parallelism_limit < 1) throw ConfigError("parallelism_limit must be >= 1");
}

double JudgeConfig::effective_temperature() const {
  if (!sampling_enabled) return 0.0;
  return temperature.value_or(default_temperature(model_id));
}

double JudgeConfig::effective_top_p() const {
  if (!sampling_enabled) return 1.0;
  return top_p.value_or(default_top_p(model_id));
}

std::optional<std::uint64_t> JudgeConfig::request_seed(std::size_t run_index) const {
  switch (seed_policy) {
    case SeedPolicy::none: return std::nullopt;
    case SeedPolicy::fixed: return seed;
    case SeedPolicy::per_run: return seed + run_index;
  }
  return std::nullopt;
}

std::string JudgeConfig::hash() const {
  nlohmann::json j = {
      {"judge_name", judge_name},
      {"model_id", model_id},
      {"temperature", effective_temperature()},
      {"top_p", effective_top_p()},
      {"sampling_enabled", sampling_enabled},
      {"prompt_variant", to_string(prompt_variant)},
      {"seed_policy", to_string(seed_policy)},
      {"seed", seed},
      {"max_retries", max_retries},
      {"reasoning_delimiters", reasoning_delimiters},
      {"parser_version", kParserVersion},
  };
  return sha256_hex(j.dump());
}

nlohmann::json JudgeConfig::to_json() const {
  nlohmann::json j = {
      {"judge_name", judge_name},
      {"endpoint_url", endpoint_url},
      {"model_id", model_id},
      {"n_runs", n_runs},
      {"sampling_enabled", sampling_enabled},
      {"prompt_variant", to_string(prompt_variant)},
      {"max_retries", max_retries},
      {"timeout_s", timeout_s},
      {"backoff_initial_s", backoff_initial_s},
      {"backoff_max_s", backoff_max_s},
      {"parallelism_limit", parallelism_limit},
      {"seed_policy", to_string(seed_policy)},
      {"seed", seed},
      {"api_key_env", api_key_env},
      {"reasoning_delimiters", reasoning_delimiters},
  };
  if (temperature) j["temperature"] = *temperature;
  if (top_p) j["top_p"] = *top_p;
  return j;
}

JudgeConfig JudgeConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("judge config must be a JSON object");
  static const char* const kKnown[] = {
      "judge_name", "endpoint_url", "model_id", "temperature", "top_p", "n_runs",
      "sampling_enabled", "prompt_variant", "max_retries", "timeout_s", "backoff_initial_s",
      "backoff_max_s", "parallelism_limit", "seed_policy", "seed", "api_key_env",
      "reasoning_delimiters"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw ConfigError(fmt::format("unknown judge config field '{}'", key));
    }
  }
  JudgeConfig c;
  try {
    c.judge_name = j.at("judge_name").get<std::string>();
    c.endpoint_url = j.at("endpoint_url").get<std::string>();
    c.model_id = j.at("model_id").get<std::string>();
    if (j.contains("temperature")) c.temperature = j["temperature"].get<double>();
    if (j.contains("top_p")) c.top_p = j["top_p"].get<double>();
    c.n_runs = j.value("n_runs", c.n_runs);
    c.sampling_enabled = j.value("sampling_enabled", c.sampling_enabled);
    if (j.contains("prompt_variant")) {
      c.prompt_variant = parse_prompt_variant(j["prompt_variant"].get<std::string>());
    }
    c.max_retries = j.value("max_retries", c.max_retries);
    c.timeout_s = j.value("timeout_s", c.timeout_s);
    c.backoff_initial_s = j.value("backoff_initial_s", c.backoff_initial_s);
    c.backoff_max_s = j.value("backoff_max_s", c.backoff_max_s);
    c.parallelism_limit = j.value("parallelism_limit", c.parallelism_limit);
    if (j.contains("seed_policy")) c.seed_policy = parse_seed_policy(j["seed_policy"].get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    if (j.contains("reasoning_delimiters")) {
      c.reasoning_delimiters = j["reasoning_delimiters"].get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("judge config: {}", e.what()));
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

JudgeConfig JudgeConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open judge config {}", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return from_json(j);
}

}  // namespace raterel
