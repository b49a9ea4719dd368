#pragma once

#include <span>
#include <vector>

#include "raterel/chat_client.hpp"
#include "raterel/judge_config.hpp"
#include "raterel/judge_run.hpp"
#include "raterel/run_store.hpp"
#include "raterel/task.hpp"

namespace raterel {

struct HarnessStats {
  std::size_t requested = 0;  // tasks sent to the endpoint in this call
  std::size_t resumed = 0;    // tasks already on disk and skipped
  std::size_t failed = 0;     // tasks left without a label
  std::size_t endpoint_failures = 0;  // of which the endpoint never answered
};

// Runs the judge config.n_runs times over `tasks`, one full pass per run,
// persisting each record to `store` in task order. Tasks already stored for
// a run are skipped, so an interrupted call can be repeated. Transport and
// parse failures are retried up to config.max_retries; a task that still has
// no label is recorded with parse_error. Config and prompt-rendering errors
// abort before any request is sent.
std::vector<JudgeRun> run_judge(const JudgeConfig& config, std::span<const Task> tasks,
                                ChatClient& client, RunStore& store,
                                const FewShotExemplars* exemplars = nullptr,
                                HarnessStats* stats = nullptr);

}  // namespace raterel
