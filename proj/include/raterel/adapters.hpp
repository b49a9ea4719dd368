#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/rating_matrix.hpp"
#include "raterel/task.hpp"

namespace raterel {

struct RowRejection {
  std::size_t line = 0;
  std::string reason;
};

// Machine-readable account of one ingest: what was read, kept, dropped.
struct LoadManifest {
  std::string benchmark;
  std::string source;
  std::size_t rows_read = 0;
  std::size_t tasks = 0;
  std::vector<RowRejection> rejected;
  std::vector<std::string> warnings;
  std::map<std::string, std::size_t> per_dataset;     // summac rows per dataset tag
  std::map<std::size_t, std::size_t> by_human_count;  // mtbench kept items per vote count
  std::size_t dropped = 0;                            // mtbench items below the vote minimum
  std::size_t min_human_ratings = 0;

  nlohmann::json to_json() const;
};

struct LoadResult {
  std::vector<Task> tasks;
  LoadManifest manifest;
};

// Dataset tags of the six SummaC sub-benchmarks.
std::span<const std::string> summac_datasets();

// Rows {id, dataset, document, summary, label in {0, 1}}, 1 = inconsistent.
LoadResult load_summac(std::istream& in, const std::string& source = "<stream>");
LoadResult load_summac(const std::filesystem::path& path);

// Rows {id, document, summary, expert_annotations: [{coherence, consistency,
// fluency, relevance}], turker_annotations: [...]}; four Likert tasks per row.
LoadResult load_summeval(std::istream& in, const std::string& source = "<stream>");
LoadResult load_summeval(const std::filesystem::path& path);

// Rows {id, category, questions[2], answers_a[2], answers_b[2],
// reference_answers[2]?, human_votes: [{judge, winner}]}. Items with fewer
// than `min_human_ratings` votes are dropped.
LoadResult load_mtbench(std::istream& in, std::size_t min_human_ratings,
                        const std::string& source = "<stream>");
LoadResult load_mtbench(const std::filesystem::path& path, std::size_t min_human_ratings);

// Matrix of one population's raters over `tasks`, which must share one kind
// (and metric). Throws InputError if no task carries that population.
RatingMatrix human_reference(std::span<const Task> tasks, PopulationKind population);

// Two single-population matrices concatenated by rater, units aligned by id
// (union, first matrix's order first); groups mark each rater column 0 or 1.
struct CrossPopulation {
  RatingMatrix matrix;
  std::vector<int> groups;
};

CrossPopulation combine_populations(const RatingMatrix& first, const RatingMatrix& second);

struct GoldDecision {
  std::string label;
  bool tie_broken = false;  // the vote was tied and resolved to "tie"
};

// Reference label: the single human label for binary tasks; the majority
// human vote for pairwise tasks, with exact ties resolved to "tie".
GoldDecision gold_label(const Task& task);

}  // namespace raterel
