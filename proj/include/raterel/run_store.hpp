#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/judge_config.hpp"
#include "raterel/judge_run.hpp"

namespace raterel {

// Append-only run storage:
//   <root>/<judge>/<config_hash>/manifest.json
//   <root>/<judge>/<config_hash>/run_<r>.jsonl   one record per task
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path config_dir(const std::string& judge, const std::string& config_hash) const;
  std::filesystem::path run_file(const std::string& judge, const std::string& config_hash,
                                 std::size_t run_index) const;

  // Writes the manifest unless one already exists; returns the stored one.
  nlohmann::json ensure_manifest(const JudgeConfig& config, const std::string& started_at);

  // Task ids already recorded for a run.
  std::set<std::string> completed_tasks(const std::string& judge, const std::string& config_hash,
                                        std::size_t run_index);

  // Appends one record and flushes. Throws DuplicateRecord if the task is
  // already recorded for this run.
  void append(const std::string& judge, const std::string& config_hash, std::size_t run_index,
              const RunRecord& record);

  std::vector<RunRecord> load_records(const std::string& judge, const std::string& config_hash,
                                      std::size_t run_index) const;

  // Every stored run, ordered by judge, config hash, run index.
  std::vector<JudgeRun> load_all() const;

 private:
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::set<std::string>& index_for(const Key& key);

  std::filesystem::path root_;
  std::mutex mutex_;
  std::map<Key, std::set<std::string>> index_;
};

std::string utc_timestamp();

}  // namespace raterel
