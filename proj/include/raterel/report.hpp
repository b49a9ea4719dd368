#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/agreement.hpp"
#include "raterel/error.hpp"
#include "raterel/consensus.hpp"
#include "raterel/self_reliability.hpp"
#include "raterel/task.hpp"

namespace raterel {

struct ReportOptions {
  ExpectedMode mode = ExpectedMode::with_replacement;
  TieRule tie_rule = TieRule::abstain();
  std::optional<ScaleKind> scale_override;  // replaces each task kind's default
  std::size_t bootstrap_replicates = 0;     // 0 = no intervals
  std::uint64_t seed = 0;
};

// An alpha value or the reason it is undefined. Never rendered as a number
// when undefined.
struct AlphaCell {
  std::optional<AgreementReport> report;
  std::string undefined_reason;
  std::string diagnostic;

  // "0.4667", or "n/a (no variation)" etc.
  std::string render() const;
  nlohmann::json to_json() const;
};

// Runs `compute`, turning UndefinedAgreement into an undefined cell.
template <typename F>
AlphaCell alpha_cell(F&& compute) {
  AlphaCell cell;
  try {
    cell.report = compute();
  } catch (const UndefinedAgreement& e) {
    cell.undefined_reason = to_string(e.reason());
    cell.diagnostic = e.what();
  }
  return cell;
}

struct SelfReliabilityRow {
  std::string judge;
  std::string config_hash;
  bool sampling_enabled = true;
  std::string group;
  std::size_t runs = 0;
  std::size_t tasks = 0;
  AlphaCell alpha;
  UnanimityResult unanimity;
};

struct AccuracyRow {
  std::string judge;
  std::string config_hash;
  std::string group;
  std::optional<ConsensusSummary> summary;
  std::string error;  // set when the summary could not be formed
};

struct DatasetAccuracyRow {
  std::string judge;
  std::string config_hash;
  std::string dataset;
  std::size_t tasks = 0;
  std::optional<double> majority;  // balanced accuracy of the run consensus
  std::string error;
};

// Agreement between two rater populations (or within one when first ==
// second). Judges enter as the majority label over their runs.
struct InterRaterRow {
  std::string group;
  std::string first;
  std::string second;
  std::size_t units = 0;
  AlphaCell alpha;
  // Within a population: raw pairwise agreement. Judge vs humans: exact
  // match of the judge consensus with the gold label.
  std::optional<double> accuracy;
};

struct HistogramRow {
  std::string group;
  std::string rater;
  std::vector<std::string> categories;
  std::vector<std::size_t> counts;
};

struct ReportBundle {
  ExpectedMode mode = ExpectedMode::with_replacement;
  std::map<std::string, Scale> scales;  // group -> scale used
  std::vector<SelfReliabilityRow> self_reliability;
  std::vector<AccuracyRow> accuracy;
  std::vector<DatasetAccuracyRow> accuracy_by_dataset;
  std::vector<InterRaterRow> inter_rater;
  std::vector<HistogramRow> histograms;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  std::string to_text() const;
  // File name -> CSV body.
  std::map<std::string, std::string> to_csv() const;
};

// Scale of a group's tasks with an optional kind override. Interval
// overrides need numeric category labels.
Scale group_scale(TaskKind kind, std::optional<ScaleKind> override_kind);

// Everything derivable from tasks (with their human labels) and stored runs.
ReportBundle build_report(std::span<const Task> tasks, std::span<const JudgeRun> runs,
                          const ReportOptions& options);

// Single-matrix report for externally supplied ratings.
ReportBundle ratings_report(const RatingMatrix& matrix, const std::string& name,
                            const ReportOptions& options);

// Fraction of within-unit pairs holding equal values.
double pairwise_agreement(const RatingMatrix& matrix);

// Writes report.json, report.txt and the CSV files into `dir`.
void write_report(const ReportBundle& bundle, const std::filesystem::path& dir);

}  // namespace raterel
