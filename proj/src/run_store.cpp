#include "raterel/run_store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "raterel/error.hpp"
#include "raterel/parsers.hpp"

namespace fs = std::filesystem;

namespace raterel {

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

namespace {

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<RunRecord> read_run_file(const fs::path& path) {
  std::vector<RunRecord> records;
  std::ifstream in(path);
  if (!in) return records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw InputError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return records;
}

// Run index from a "run_<r>.jsonl" file name.
std::optional<std::size_t> run_index_of(const fs::path& path) {
  const auto name = path.filename().string();
  if (name.rfind("run_", 0) != 0 || path.extension() != ".jsonl") return std::nullopt;
  const auto digits = name.substr(4, name.size() - 4 - 6);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
  return std::stoul(digits);
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

fs::path RunStore::config_dir(const std::string& judge, const std::string& config_hash) const {
  return root_ / judge / config_hash;
}

fs::path RunStore::run_file(const std::string& judge, const std::string& config_hash,
                            std::size_t run_index) const {
  return config_dir(judge, config_hash) / fmt::format("run_{}.jsonl", run_index);
}

nlohmann::json RunStore::ensure_manifest(const JudgeConfig& config, const std::string& started_at) {
  std::lock_guard lock(mutex_);
  const auto hash = config.hash();
  const auto dir = config_dir(config.judge_name, hash);
  const auto path = dir / "manifest.json";
  if (fs::exists(path)) return read_json_file(path);
  fs::create_directories(dir);
  nlohmann::json manifest = {{"config", config.to_json()},
                             {"config_hash", hash},
                             {"started_at", started_at},
                             {"parser_version", kParserVersion}};
  std::ofstream out(path);
  out << manifest.dump(2) << '\n';
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  return manifest;
}

std::set<std::string>& RunStore::index_for(const Key& key) {
  auto it = index_.find(key);
  if (it == index_.end()) {
    std::set<std::string> ids;
    for (const auto& r : read_run_file(run_file(std::get<0>(key), std::get<1>(key), std::get<2>(key)))) {
      ids.insert(r.task_id);
    }
    it = index_.emplace(key, std::move(ids)).first;
  }
  return it->second;
}

std::set<std::string> RunStore::completed_tasks(const std::string& judge,
                                                const std::string& config_hash,
                                                std::size_t run_index) {
  std::lock_guard lock(mutex_);
  return index_for({judge, config_hash, run_index});
}

void RunStore::append(const std::string& judge, const std::string& config_hash,
                      std::size_t run_index, const RunRecord& record) {
  std::lock_guard lock(mutex_);
  auto& ids = index_for({judge, config_hash, run_index});
  if (ids.count(record.task_id)) {
    throw DuplicateRecord(fmt::format("{}/{} run {} already holds task '{}'", judge, config_hash,
                                      run_index, record.task_id));
  }
  const auto path = run_file(judge, config_hash, run_index);
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  out << record.to_json().dump() << '\n';
  out.flush();
  if (!out) throw InputError(fmt::format("cannot append to {}", path.string()));
  ids.insert(record.task_id);
}

std::vector<RunRecord> RunStore::load_records(const std::string& judge,
                                              const std::string& config_hash,
                                              std::size_t run_index) const {
  return read_run_file(run_file(judge, config_hash, run_index));
}

std::vector<JudgeRun> RunStore::load_all() const {
  std::vector<JudgeRun> runs;
  for (const auto& judge_dir : sorted_subdirs(root_)) {
    for (const auto& hash_dir : sorted_subdirs(judge_dir)) {
      const auto manifest_path = hash_dir / "manifest.json";
      if (!fs::exists(manifest_path)) continue;
      const auto manifest = read_json_file(manifest_path);
      const auto config = JudgeConfig::from_json(manifest.at("config"));
      std::vector<std::pair<std::size_t, fs::path>> files;
      for (const auto& e : fs::directory_iterator(hash_dir)) {
        if (auto r = run_index_of(e.path())) files.emplace_back(*r, e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& [r, path] : files) {
        JudgeRun run;
        run.judge_name = config.judge_name;
        run.run_index = r;
        run.config_hash = manifest.at("config_hash").get<std::string>();
        run.sampling_enabled = config.sampling_enabled;
        run.records = read_run_file(path);
        runs.push_back(std::move(run));
      }
    }
  }
  return runs;
}

}  // namespace raterel
