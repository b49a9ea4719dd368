#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "raterel/commands.hpp"

namespace {

const std::map<std::string, raterel::ExpectedMode> kModes{
    {"with-replacement", raterel::ExpectedMode::with_replacement},
    {"without-replacement", raterel::ExpectedMode::without_replacement},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krippendorff's alpha reliability toolkit and LLM-judge harness"};
  app.require_subcommand(1);

  raterel::IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert benchmark rows into canonical task JSONL");
  ingest_cmd->add_option("--benchmark", ingest.benchmark, "summac, summeval or mtbench")
      ->required()
      ->check(CLI::IsMember({"summac", "summeval", "mtbench"}));
  ingest_cmd->add_option("input", ingest.input, "Benchmark JSONL")->required();
  ingest_cmd->add_option("-o,--output", ingest.output, "Task JSONL to write")->required();
  ingest_cmd->add_option("--manifest", ingest.manifest, "Manifest path (default <output>.manifest.json)");
  ingest_cmd->add_option("--min-human", ingest.min_human, "Minimum human votes per MT-Bench item")
      ->capture_default_str();
  ingest_cmd->add_flag("--lenient", ingest.lenient, "Keep valid rows when some are rejected");

  raterel::JudgeOptions judge;
  auto* judge_cmd = app.add_subcommand("judge", "Run an LLM judge over tasks, N runs");
  judge_cmd->add_option("--config", judge.config, "Judge config JSON")->required();
  judge_cmd->add_option("--tasks", judge.tasks, "Task JSONL")->required();
  judge_cmd->add_option("--runs-dir", judge.runs_dir, "Run storage root")->required();
  judge_cmd->add_option("--exemplars", judge.exemplar_pool, "Task JSONL to draw few-shot exemplars from");

  raterel::AgreeOptions agree;
  std::string agree_mode = "with-replacement";
  auto* agree_cmd = app.add_subcommand("agree", "Agreement report from stored runs or a ratings file");
  agree_cmd->add_option("--runs-dir", agree.runs_dir, "Run storage root");
  agree_cmd->add_option("--tasks", agree.tasks, "Task JSONL the runs were made on");
  agree_cmd->add_option("--ratings", agree.ratings, "Ratings JSONL or CSV (unit, rater, value)");
  agree_cmd->add_option("--scale", agree.scale,
                        "Scale sidecar JSON (ratings) or nominal|ordinal|interval override (runs)");
  agree_cmd->add_option("--mode", agree_mode, "Expected disagreement sampling")
      ->check(CLI::IsMember({"with-replacement", "without-replacement"}))
      ->capture_default_str();
  agree_cmd->add_option("--tie-rule", agree.tie_rule, "abstain, error or prefer:<label>")
      ->capture_default_str();
  agree_cmd->add_option("--bootstrap", agree.bootstrap, "Bootstrap replicates for alpha intervals (0 = none)");
  agree_cmd->add_option("--seed", agree.seed, "Bootstrap seed");
  agree_cmd->add_option("-o,--out", agree.out_dir, "Directory for report.json, report.txt and CSVs");

  raterel::SimulateOptions simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Synthetic raters: chance inflation or fidelity sweep");
  sim_cmd->add_option("--marginals", simulate.marginals, "Label marginals")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--n-items", simulate.n_items, "Items per rater")->capture_default_str();
  sim_cmd->add_option("--seed", simulate.seed, "Seed")->capture_default_str();
  sim_cmd->add_option("--fidelity", simulate.fidelity, "Probability of copying gold")->capture_default_str();
  sim_cmd->add_option("--replicates", simulate.replicates, "Bootstrap replicates")->capture_default_str();
  sim_cmd->add_option("--sweep", simulate.sweep, "Fidelity grid, e.g. 0,0.5,1")->delimiter(',');
  sim_cmd->add_option("--raters", simulate.raters, "Raters per sweep point")->capture_default_str();
  sim_cmd->add_option("-o,--out", simulate.out, "Also write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : raterel::kExitInput;
  }

  if (*ingest_cmd) return raterel::cmd_ingest(ingest, std::cout, std::cerr);
  if (*judge_cmd) return raterel::cmd_judge(judge, std::cout, std::cerr);
  if (*agree_cmd) {
    agree.mode = kModes.at(agree_mode);
    return raterel::cmd_agree(agree, std::cout, std::cerr);
  }
  return raterel::cmd_simulate(simulate, std::cout, std::cerr);
}
