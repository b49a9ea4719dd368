#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "raterel/agreement.hpp"

namespace raterel {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitEndpoint = 2,
  kExitInvariant = 3,
};

struct IngestOptions {
  std::string benchmark;  // summac | summeval | mtbench
  std::filesystem::path input;
  std::filesystem::path output;              // task JSONL
  std::optional<std::filesystem::path> manifest;  // default: <output>.manifest.json
  std::size_t min_human = 2;
  bool lenient = false;
};

struct JudgeOptions {
  std::filesystem::path config;
  std::filesystem::path tasks;
  std::filesystem::path runs_dir;
  std::optional<std::filesystem::path> exemplar_pool;  // tasks for few-shot prompts
};

struct AgreeOptions {
  std::optional<std::filesystem::path> runs_dir;
  std::optional<std::filesystem::path> tasks;
  std::optional<std::filesystem::path> ratings;
  // Ratings mode: path of a scale JSON sidecar. Runs mode: optional kind
  // name overriding the default scale of each task kind.
  std::optional<std::string> scale;
  std::optional<std::filesystem::path> out_dir;
  ExpectedMode mode = ExpectedMode::with_replacement;
  std::string tie_rule = "abstain";
  std::size_t bootstrap = 0;
  std::uint64_t seed = 0;
};

struct SimulateOptions {
  std::vector<double> marginals{0.95, 0.05};
  std::size_t n_items = 10000;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  std::size_t replicates = 1000;
  std::vector<double> sweep;  // fidelity grid; empty runs the single experiment
  std::size_t raters = 3;     // sweep only
  std::optional<std::filesystem::path> out;
};

// Each command writes results to `out`, diagnostics to `err`, and returns an
// ExitCode. Errors never escape as exceptions.
int cmd_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err);
int cmd_judge(const JudgeOptions& options, std::ostream& out, std::ostream& err);
int cmd_agree(const AgreeOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

// Ratings as JSONL {unit, rater, value} or CSV with a unit,rater,value
// header (chosen by the .csv extension).
RatingMatrix read_ratings(const std::filesystem::path& path, const Scale& scale);

}  // namespace raterel
