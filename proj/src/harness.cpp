#include "raterel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "raterel/error.hpp"
#include "raterel/parsers.hpp"

namespace raterel {
namespace {

constexpr std::string_view kEndpointPrefix = "endpoint: ";

struct PreparedTask {
  const Task* task;
  std::vector<ChatMessage> messages;
  std::string prompt_hash;
};

RunRecord judge_one(const JudgeConfig& config, const PreparedTask& p, ChatClient& client,
                    std::size_t run_index) {
  ChatRequest request{config.model_id, p.messages, config.effective_temperature(),
                      config.effective_top_p(), config.request_seed(run_index)};
  RunRecord record;
  record.task_id = p.task->id;
  record.prompt_hash = p.prompt_hash;

  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    record.attempt_count = attempt + 1;
    bool retryable = true;
    try {
      record.raw_response = client.complete(request);
      auto parsed = parse_label(*p.task, record.raw_response, config.reasoning_delimiters);
      if (parsed.ok()) {
        record.parsed_label = std::move(parsed.label);
        break;
      }
      last_error = *parsed.error;
    } catch (const EndpointError& e) {
      last_error = fmt::format("{}{}", kEndpointPrefix, e.what());
      retryable = e.retryable();
    }
    if (!retryable || attempt == config.max_retries) break;
    const double delay = std::min(config.backoff_max_s,
                                  config.backoff_initial_s * std::ldexp(1.0, attempt));
    if (delay > 0) std::this_thread::sleep_for(std::chrono::duration<double>(delay));
  }
  if (!record.parsed_label) record.parse_error = last_error;
  record.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

// Judges `pending` concurrently and hands records to `sink` in list order.
template <typename Sink>
void run_pass(const JudgeConfig& config, const std::vector<const PreparedTask*>& pending,
              ChatClient& client, std::size_t run_index, Sink&& sink) {
  std::vector<std::optional<RunRecord>> done(pending.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> stop{false};

  auto worker = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= pending.size()) return;
      try {
        auto record = judge_one(config, *pending[i], client, run_index);
        std::lock_guard lock(mutex);
        done[i] = std::move(record);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
      ready.notify_all();
    }
  };

  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism_limit),
                                               pending.size());
  std::vector<std::jthread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);

  try {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      RunRecord record;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return done[i].has_value() || failure; });
        if (!done[i]) break;
        record = std::move(*done[i]);
        done[i].reset();
      }
      sink(record);
    }
  } catch (...) {
    stop = true;
    workers.clear();
    throw;
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<JudgeRun> run_judge(const JudgeConfig& config, std::span<const Task> tasks,
                                ChatClient& client, RunStore& store,
                                const FewShotExemplars* exemplars, HarnessStats* stats) {
  config.validate();
  {
    std::set<std::string> ids;
    for (const auto& t : tasks) {
      if (!ids.insert(t.id).second) throw InputError(fmt::format("duplicate task id '{}'", t.id));
    }
  }

  std::vector<PreparedTask> prepared;
  prepared.reserve(tasks.size());
  for (const auto& t : tasks) {
    try {
      auto messages = render_prompt(t, config.prompt_variant, exemplars);
      auto hash = prompt_hash(messages);
      prepared.push_back({&t, std::move(messages), std::move(hash)});
    } catch (const InputError& e) {
      throw ConfigError(fmt::format("task '{}': {}", t.id, e.what()));
    }
  }

  const auto hash = config.hash();
  store.ensure_manifest(config, utc_timestamp());
  HarnessStats local;

  std::vector<JudgeRun> runs;
  for (std::size_t r = 0; r < static_cast<std::size_t>(config.n_runs); ++r) {
    const auto completed = store.completed_tasks(config.judge_name, hash, r);
    std::vector<const PreparedTask*> pending;
    for (const auto& p : prepared) {
      if (completed.count(p.task->id)) {
        ++local.resumed;
      } else {
        pending.push_back(&p);
      }
    }
    run_pass(config, pending, client, r, [&](const RunRecord& record) {
      store.append(config.judge_name, hash, r, record);
      ++local.requested;
      if (!record.parsed_label) ++local.failed;
      if (record.parse_error && record.parse_error->rfind(kEndpointPrefix, 0) == 0) {
        ++local.endpoint_failures;
      }
    });

    std::map<std::string, RunRecord> by_id;
    for (auto& rec : store.load_records(config.judge_name, hash, r)) {
      by_id.emplace(rec.task_id, std::move(rec));
    }
    JudgeRun run;
    run.judge_name = config.judge_name;
    run.run_index = r;
    run.config_hash = hash;
    run.sampling_enabled = config.sampling_enabled;
    run.records.reserve(tasks.size());
    for (const auto& t : tasks) {
      auto it = by_id.find(t.id);
      if (it == by_id.end()) {
        throw Error(fmt::format("run {} is missing task '{}' after the pass", r, t.id));
      }
      run.records.push_back(std::move(it->second));
    }
    runs.push_back(std::move(run));
  }
  if (stats) *stats = local;
  return runs;
}

}  // namespace raterel
