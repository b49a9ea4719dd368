#include "raterel/commands.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "raterel/adapters.hpp"
#include "raterel/chat_client.hpp"
#include "raterel/error.hpp"
#include "raterel/harness.hpp"
#include "raterel/report.hpp"
#include "raterel/run_store.hpp"
#include "raterel/synthetic.hpp"

namespace fs = std::filesystem;

namespace raterel {
namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const EndpointError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitEndpoint;
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const DuplicateRecord& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const UndefinedAgreement& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kExitInvariant;
  }
}

void require_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) throw InputError(fmt::format("{} '{}' not found", what, path.string()));
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw InputError(fmt::format("line {}: unterminated quote", line_no));
  return fields;
}

}  // namespace

RatingMatrix read_ratings(const fs::path& path, const Scale& scale) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open ratings file {}", path.string()));
  std::vector<Rating> ratings;
  std::string line;
  std::size_t line_no = 0;
  const bool csv = path.extension() == ".csv";
  std::optional<std::array<std::size_t, 3>> columns;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (csv) {
      auto fields = split_csv_line(line, line_no);
      if (!columns) {
        std::array<std::size_t, 3> idx{};
        const char* names[] = {"unit", "rater", "value"};
        for (int k = 0; k < 3; ++k) {
          auto it = std::find(fields.begin(), fields.end(), names[k]);
          if (it == fields.end()) {
            throw InputError(fmt::format("{}:1: header lacks column '{}'", path.string(), names[k]));
          }
          idx[k] = static_cast<std::size_t>(it - fields.begin());
        }
        columns = idx;
        continue;
      }
      if (fields.size() <= std::max({(*columns)[0], (*columns)[1], (*columns)[2]})) {
        throw InputError(fmt::format("{}:{}: too few fields", path.string(), line_no));
      }
      const auto& value = fields[(*columns)[2]];
      if (value.empty()) continue;  // missing cell
      ratings.push_back({fields[(*columns)[0]], fields[(*columns)[1]], value});
    } else {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
        const auto& v = j.at("value");
        if (v.is_null()) continue;
        RawValue raw = v.is_number() ? RawValue(v.get<double>()) : RawValue(v.get<std::string>());
        ratings.push_back({j.at("unit").get<std::string>(), j.at("rater").get<std::string>(), raw});
      } catch (const nlohmann::json::exception& e) {
        throw InputError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
      }
    }
  }
  try {
    return RatingMatrix::build(ratings, scale);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

int cmd_ingest(const IngestOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(o.input, "input file");
    LoadResult result;
    if (o.benchmark == "summac") {
      result = load_summac(o.input);
    } else if (o.benchmark == "summeval") {
      result = load_summeval(o.input);
    } else if (o.benchmark == "mtbench") {
      result = load_mtbench(o.input, o.min_human);
    } else {
      throw InputError(fmt::format("unknown benchmark '{}' (summac, summeval, mtbench)", o.benchmark));
    }
    for (const auto& r : result.manifest.rejected) {
      fmt::print(err, "{}:{}: {}\n", o.input.string(), r.line, r.reason);
    }
    for (const auto& w : result.manifest.warnings) fmt::print(err, "warning: {}\n", w);
    if (!result.manifest.rejected.empty() && !o.lenient) {
      fmt::print(err, "error: {} row(s) rejected; rerun with --lenient to keep the rest\n",
                 result.manifest.rejected.size());
      return static_cast<int>(kExitInput);
    }
    if (o.output.has_parent_path()) fs::create_directories(o.output.parent_path());
    write_tasks(o.output, result.tasks);
    const auto manifest_path = o.manifest.value_or(fs::path(o.output.string() + ".manifest.json"));
    std::ofstream m(manifest_path);
    m << result.manifest.to_json().dump(2) << '\n';
    if (!m) throw InputError(fmt::format("cannot write {}", manifest_path.string()));
    fmt::print(out, "{}\n", result.manifest.to_json().dump(2));
    return static_cast<int>(kExitOk);
  });
}

int cmd_judge(const JudgeOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(o.config, "judge config");
    require_file(o.tasks, "task file");
    const auto config = JudgeConfig::load(o.config);
    const auto tasks = read_tasks(o.tasks);
    std::optional<FewShotExemplars> exemplars;
    if (o.exemplar_pool) {
      require_file(*o.exemplar_pool, "exemplar pool");
      const auto pool = read_tasks(*o.exemplar_pool);
      exemplars = FewShotExemplars::from_pool(pool);
    }
    auto client = make_chat_client(config);
    RunStore store(o.runs_dir);
    HarnessStats stats;
    const auto runs = run_judge(config, tasks, *client, store, exemplars ? &*exemplars : nullptr, &stats);

    nlohmann::json summary = {{"judge", config.judge_name},
                              {"config_hash", config.hash()},
                              {"runs", runs.size()},
                              {"tasks", tasks.size()},
                              {"requested", stats.requested},
                              {"resumed", stats.resumed},
                              {"failed", stats.failed},
                              {"endpoint_failures", stats.endpoint_failures},
                              {"directory", store.config_dir(config.judge_name, config.hash()).string()}};
    fmt::print(out, "{}\n", summary.dump(2));
    if (stats.failed > 0) fmt::print(err, "warning: {} task(s) left without a label\n", stats.failed);
    if (stats.requested > 0 && stats.endpoint_failures == stats.requested) {
      fmt::print(err, "error: the endpoint answered none of {} request(s)\n", stats.requested);
      return static_cast<int>(kExitEndpoint);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_agree(const AgreeOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ReportOptions ro;
    ro.mode = o.mode;
    ro.tie_rule = TieRule::parse(o.tie_rule);
    ro.bootstrap_replicates = o.bootstrap;
    ro.seed = o.seed;

    ReportBundle bundle;
    if (o.ratings) {
      if (o.runs_dir || o.tasks) throw InputError("--ratings excludes --runs-dir and --tasks");
      if (!o.scale) throw InputError("--ratings needs --scale <sidecar.json>");
      require_file(*o.ratings, "ratings file");
      require_file(*o.scale, "scale sidecar");
      Scale scale = [&] {
        try {
          return Scale::from_json(read_json(*o.scale));
        } catch (const nlohmann::json::exception& e) {
          throw InputError(fmt::format("{}: {}", *o.scale, e.what()));
        }
      }();
      const auto matrix = read_ratings(*o.ratings, scale);
      bundle = ratings_report(matrix, o.ratings->stem().string(), ro);
    } else {
      if (!o.runs_dir || !o.tasks) throw InputError("agree needs --runs-dir with --tasks, or --ratings");
      require_file(*o.tasks, "task file");
      if (!fs::is_directory(*o.runs_dir)) {
        throw InputError(fmt::format("runs directory '{}' not found", o.runs_dir->string()));
      }
      if (o.scale) ro.scale_override = parse_scale_kind(*o.scale);
      const auto tasks = read_tasks(*o.tasks);
      const auto runs = RunStore(*o.runs_dir).load_all();
      bundle = build_report(tasks, runs, ro);
    }
    if (o.out_dir) write_report(bundle, *o.out_dir);
    out << bundle.to_text();
    return static_cast<int>(kExitOk);
  });
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    nlohmann::json result;
    if (o.sweep.empty()) {
      BootstrapOptions b;
      b.replicates = o.replicates;
      b.seed = o.seed;
      result = chance_inflation_experiment(o.marginals, o.n_items, o.seed, o.fidelity, b).to_json();
    } else {
      result = nlohmann::json::array();
      for (const auto& p : fidelity_sweep(o.marginals, o.sweep, o.n_items, o.raters, o.seed)) {
        result.push_back(p.to_json());
      }
    }
    const auto body = result.dump(2) + "\n";
    if (o.out) {
      std::ofstream f(*o.out);
      f << body;
      if (!f) throw InputError(fmt::format("cannot write {}", o.out->string()));
    }
    out << body;
    return static_cast<int>(kExitOk);
  });
}

}  // namespace raterel
