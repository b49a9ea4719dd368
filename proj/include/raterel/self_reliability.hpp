#pragma once

#include <optional>
#include <span>

#include "raterel/agreement.hpp"
#include "raterel/judge_run.hpp"

namespace raterel {

// One rater column per run, one unit per task (first run's task order).
// Unparsed responses become missing cells. Throws InputError if the runs do
// not cover the same task ids or a label is inadmissible under `scale`.
RatingMatrix runs_to_matrix(std::span<const JudgeRun> runs, const Scale& scale);

// Intra-rater alpha over a judge's runs. Needs at least two runs.
AgreementReport self_reliability(std::span<const JudgeRun> runs, const Scale& scale,
                                 ExpectedMode mode = ExpectedMode::with_replacement);

struct UnanimityResult {
  std::optional<double> rate;  // nullopt when no task is labeled in every run
  std::size_t unanimous = 0;
  std::size_t considered = 0;
  std::size_t excluded = 0;  // tasks with a missing label in some run
};

// Fraction of tasks on which every run emitted the same label.
UnanimityResult unanimity_rate(std::span<const JudgeRun> runs);

}  // namespace raterel
