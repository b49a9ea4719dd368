#include "raterel/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "raterel/adapters.hpp"
#include "raterel/error.hpp"

namespace fs = std::filesystem;

namespace raterel {
namespace {

std::string num(double x) { return fmt::format("{:.4f}", x); }
std::string num(const std::optional<double>& x) { return x ? num(*x) : "n/a"; }

std::string short_hash(const std::string& hash) { return hash.substr(0, 8); }

std::string distance_name(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::nominal: return "nominal (0/1)";
    case ScaleKind::ordinal: return "ordinal (rank mass)";
    case ScaleKind::interval: return "interval (squared difference)";
  }
  return "unknown";
}

class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  bool empty() const { return rows_.size() == 1; }

  std::string render() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    auto line = [&](const std::vector<std::string>& row) {
      std::string text;
      for (std::size_t c = 0; c < row.size(); ++c) {
        text += c + 1 == row.size() ? row[c] : fmt::format("{:<{}}  ", row[c], width[c]);
      }
      while (!text.empty() && text.back() == ' ') text.pop_back();
      out += text + '\n';
    };
    line(rows_.front());
    std::vector<std::string> rule;
    for (auto w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (std::size_t r = 1; r < rows_.size(); ++r) line(rows_[r]);
    return out;
  }

  std::string csv() const {
    std::string out;
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        const auto& cell = row[c];
        if (cell.find_first_of(",\"\n") == std::string::npos) {
          out += cell;
        } else {
          out += '"';
          for (char ch : cell) {
            if (ch == '"') out += '"';
            out += ch;
          }
          out += '"';
        }
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

// Same cells re-expressed under another scale, matching by label.
RatingMatrix rescale(const RatingMatrix& m, const Scale& scale) {
  if (m.scale() == scale) return m;
  std::vector<std::optional<double>> cells(m.unit_count() * m.rater_count());
  for (std::size_t u = 0; u < m.unit_count(); ++u) {
    for (std::size_t r = 0; r < m.rater_count(); ++r) {
      if (auto v = m.cell(u, r)) {
        const auto label = m.scale().label(*v);
        auto c = scale.canonicalize(std::string_view(label));
        if (!c) throw InputError(fmt::format("label '{}' is inadmissible under the report scale", label));
        cells[u * m.rater_count() + r] = c;
      }
    }
  }
  return RatingMatrix::from_cells({m.units().begin(), m.units().end()},
                                  {m.raters().begin(), m.raters().end()}, std::move(cells), scale);
}

std::vector<JudgeRun> restrict_runs(std::span<const JudgeRun> runs, const std::set<std::string>& ids) {
  std::vector<JudgeRun> out;
  for (const auto& run : runs) {
    JudgeRun r = run;
    r.records.clear();
    for (const auto& rec : run.records) {
      if (ids.count(rec.task_id)) r.records.push_back(rec);
    }
    if (!r.records.empty()) out.push_back(std::move(r));
  }
  return out;
}

struct ConfigRuns {
  std::string judge;
  std::string hash;
  std::string label;
  bool sampling = true;
  std::vector<JudgeRun> runs;
};

std::vector<ConfigRuns> group_configs(std::span<const JudgeRun> runs) {
  std::vector<ConfigRuns> configs;
  for (const auto& run : runs) {
    auto it = std::find_if(configs.begin(), configs.end(), [&](const ConfigRuns& c) {
      return c.judge == run.judge_name && c.hash == run.config_hash;
    });
    if (it == configs.end()) {
      configs.push_back({run.judge_name, run.config_hash, run.judge_name, run.sampling_enabled, {}});
      it = std::prev(configs.end());
    }
    it->runs.push_back(run);
  }
  std::map<std::string, std::size_t> per_judge;
  for (const auto& c : configs) per_judge[c.judge] += c.sampling;
  for (auto& c : configs) {
    if (!c.sampling) {
      c.label = c.judge + " (no sampling)";
    } else if (per_judge[c.judge] > 1) {
      c.label = c.judge + "@" + short_hash(c.hash);
    }
  }
  return configs;
}

bool has_gold(TaskKind kind) { return kind != TaskKind::likert; }

std::optional<AgreementReport> with_ci(AgreementReport report, const RatingMatrix& matrix,
                                       const ReportOptions& options) {
  if (options.bootstrap_replicates > 0) {
    BootstrapOptions b;
    b.replicates = options.bootstrap_replicates;
    b.seed = options.seed;
    report.ci = bootstrap_ci(matrix, options.mode, b);
  }
  return report;
}

}  // namespace

std::string AlphaCell::render() const {
  if (report) return num(report->alpha);
  std::string reason = undefined_reason;
  std::replace(reason.begin(), reason.end(), '_', ' ');
  return fmt::format("n/a ({})", reason);
}

nlohmann::json AlphaCell::to_json() const {
  if (report) return report->to_json();
  return {{"alpha", nullptr}, {"undefined", undefined_reason}, {"diagnostic", diagnostic}};
}

Scale group_scale(TaskKind kind, std::optional<ScaleKind> override_kind) {
  const Scale base = scale_for(kind);
  if (!override_kind || *override_kind == base.kind()) return base;
  const std::vector<std::string> cats(base.categories().begin(), base.categories().end());
  switch (*override_kind) {
    case ScaleKind::nominal: return Scale::nominal(cats);
    case ScaleKind::ordinal: return Scale::ordinal(cats);
    case ScaleKind::interval: {
      std::vector<double> values;
      for (const auto& c : cats) {
        try {
          std::size_t used = 0;
          values.push_back(std::stod(c, &used));
          if (used != c.size()) throw std::invalid_argument(c);
        } catch (const std::exception&) {
          throw ConfigError(fmt::format("{} labels are not numeric; interval scale unavailable",
                                        to_string(kind)));
        }
      }
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      return Scale::interval(*lo, *hi);
    }
  }
  return base;
}

double pairwise_agreement(const RatingMatrix& matrix) {
  std::size_t pairs = 0;
  std::size_t same = 0;
  std::vector<double> values;
  for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
    values.clear();
    for (std::size_t r = 0; r < matrix.rater_count(); ++r) {
      if (auto v = matrix.cell(u, r)) values.push_back(*v);
    }
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b, ++pairs) same += values[a] == values[b];
    }
  }
  if (pairs == 0) throw UndefinedAgreement(UndefinedReason::no_pairs, "no unit holds two ratings");
  return static_cast<double>(same) / static_cast<double>(pairs);
}

ReportBundle build_report(std::span<const Task> tasks, std::span<const JudgeRun> runs,
                          const ReportOptions& options) {
  ReportBundle bundle;
  bundle.mode = options.mode;

  std::vector<std::string> group_order;
  std::map<std::string, std::vector<Task>> groups;
  for (const auto& t : tasks) {
    const auto g = task_group(t);
    if (!groups.count(g)) group_order.push_back(g);
    groups[g].push_back(t);
  }
  const auto configs = group_configs(runs);
  std::map<std::string, const ConfigRuns*> no_sampling;
  for (const auto& c : configs) {
    if (!c.sampling && !no_sampling.count(c.judge)) no_sampling[c.judge] = &c;
  }

  for (const auto& g : group_order) {
    const auto& gtasks = groups[g];
    const TaskKind kind = gtasks.front().kind;
    const Scale scale = group_scale(kind, options.scale_override);
    const Scale label_scale = scale_for(kind);
    bundle.scales.emplace(g, scale);
    std::set<std::string> ids;
    for (const auto& t : gtasks) ids.insert(t.id);

    std::vector<GoldLabel> gold;
    std::map<std::string, std::string> gold_by_id;
    if (has_gold(kind)) {
      for (const auto& t : gtasks) {
        if (t.human_labels.empty()) continue;
        const auto decision = gold_label(t);
        gold_by_id[t.id] = decision.label;
      }
    }

    // Per-config tables.
    std::map<std::string, std::vector<MaybeLabel>> consensus_by_label;
    std::map<std::string, std::vector<JudgeRun>> restricted_by_label;
    for (const auto& c : configs) {
      auto gruns = restrict_runs(c.runs, ids);
      if (gruns.empty()) continue;
      SelfReliabilityRow row{c.judge, c.hash, c.sampling, g, gruns.size(), gruns.front().records.size(), {}, {}};
      if (gruns.size() >= 2) {
        row.alpha = alpha_cell([&] {
          const auto matrix = runs_to_matrix(gruns, scale);
          return *with_ci(krippendorff_alpha(matrix, options.mode), matrix, options);
        });
        row.unanimity = unanimity_rate(gruns);
      } else {
        row.alpha.undefined_reason = "single_run";
        row.alpha.diagnostic = "self-reliability needs at least two runs";
      }
      bundle.self_reliability.push_back(std::move(row));
      if (!c.sampling) continue;

      std::vector<std::string> run_ids;
      for (const auto& rec : gruns.front().records) run_ids.push_back(rec.task_id);
      consensus_by_label[c.label] = consensus_labels(gruns, run_ids, options.tie_rule);
      restricted_by_label[c.label] = gruns;

      if (!has_gold(kind)) continue;
      std::vector<GoldLabel> run_gold;
      for (const auto& id : run_ids) {
        if (auto it = gold_by_id.find(id); it != gold_by_id.end()) run_gold.push_back({id, it->second});
      }
      AccuracyRow acc{c.judge, c.hash, g, std::nullopt, {}};
      try {
        std::vector<JudgeRun> gold_runs;
        std::set<std::string> gold_ids;
        for (const auto& gl : run_gold) gold_ids.insert(gl.task_id);
        gold_runs = restrict_runs(gruns, gold_ids);
        std::vector<JudgeRun> ns_runs;
        const JudgeRun* ns = nullptr;
        if (auto it = no_sampling.find(c.judge); it != no_sampling.end()) {
          ns_runs = restrict_runs(it->second->runs, gold_ids);
          if (!ns_runs.empty()) ns = &ns_runs.front();
        }
        acc.summary = per_run_vs_consensus(gold_runs, run_gold, options.tie_rule, ns);
      } catch (const InputError& e) {
        acc.error = e.what();
      }
      bundle.accuracy.push_back(std::move(acc));

      if (kind == TaskKind::binary_consistency) {
        std::map<std::string, std::vector<const Task*>> by_dataset;
        for (const auto& t : gtasks) {
          if (gold_by_id.count(t.id)) by_dataset[t.dataset_tag].push_back(&t);
        }
        for (const auto& [dataset, dtasks] : by_dataset) {
          DatasetAccuracyRow d{c.judge, c.hash, dataset, dtasks.size(), std::nullopt, {}};
          std::vector<std::string> dids;
          std::vector<Label> dgold;
          for (const auto* t : dtasks) {
            dids.push_back(t->id);
            dgold.push_back(gold_by_id[t->id]);
          }
          try {
            const auto predicted = consensus_labels(gruns, dids, options.tie_rule);
            std::vector<Label> classes(label_scale.categories().begin(), label_scale.categories().end());
            d.majority = balanced_accuracy(ConfusionCounts::from_labels(predicted, dgold, classes));
          } catch (const InputError& e) {
            d.error = e.what();
          }
          bundle.accuracy_by_dataset.push_back(std::move(d));
        }
      }
    }

    // Human populations.
    std::map<std::string, RatingMatrix> populations;
    for (auto pop : {PopulationKind::expert, PopulationKind::crowd}) {
      const bool present = std::any_of(gtasks.begin(), gtasks.end(), [&](const Task& t) {
        return std::any_of(t.human_labels.begin(), t.human_labels.end(),
                           [&](const HumanLabel& h) { return h.population == pop; });
      });
      if (!present) continue;
      const std::string name(to_string(pop));
      auto matrix = rescale(human_reference(gtasks, pop), scale);
      if (matrix.rater_count() >= 2) {
        InterRaterRow row{g, name, name, matrix.unit_count(), {}, std::nullopt};
        row.alpha = alpha_cell([&] { return *with_ci(krippendorff_alpha(matrix, options.mode), matrix, options); });
        try {
          row.accuracy = pairwise_agreement(matrix);
        } catch (const UndefinedAgreement&) {
        }
        bundle.inter_rater.push_back(std::move(row));
      }
      populations.emplace(name, std::move(matrix));
    }
    if (populations.count("expert") && populations.count("crowd")) {
      const auto cross = combine_populations(populations.at("expert"), populations.at("crowd"));
      InterRaterRow row{g, "expert", "crowd", cross.matrix.unit_count(), {}, std::nullopt};
      row.alpha = alpha_cell([&] { return cross_group_alpha(cross.matrix, cross.groups, options.mode); });
      bundle.inter_rater.push_back(std::move(row));
    }
    for (const auto& [label, consensus] : consensus_by_label) {
      const auto& gruns = restricted_by_label[label];
      std::vector<Rating> ratings;
      std::vector<MaybeLabel> predicted;
      std::vector<Label> gold_labels;
      for (std::size_t i = 0; i < consensus.size(); ++i) {
        const auto& id = gruns.front().records[i].task_id;
        if (consensus[i]) ratings.push_back({id, label, *consensus[i]});
        if (auto it = gold_by_id.find(id); it != gold_by_id.end()) {
          predicted.push_back(consensus[i]);
          gold_labels.push_back(it->second);
        }
      }
      if (ratings.empty()) continue;
      const auto judge_matrix = RatingMatrix::build(ratings, scale);
      std::optional<double> acc;
      if (!gold_labels.empty()) {
        const auto a = accuracy(predicted, gold_labels);
        if (a.scored > 0) acc = a.value;
      }
      for (const auto& [pop, matrix] : populations) {
        const auto cross = combine_populations(matrix, judge_matrix);
        InterRaterRow row{g, pop, label, cross.matrix.unit_count(), {}, acc};
        row.alpha = alpha_cell([&] { return cross_group_alpha(cross.matrix, cross.groups, options.mode); });
        bundle.inter_rater.push_back(std::move(row));
      }
    }

    // Score distributions over the task kind's labels.
    const std::vector<std::string> cats(label_scale.categories().begin(), label_scale.categories().end());
    auto histogram = [&](const std::string& rater, auto&& each_label) {
      HistogramRow h{g, rater, cats, std::vector<std::size_t>(cats.size(), 0)};
      each_label([&](const std::string& l) {
        auto it = std::find(cats.begin(), cats.end(), l);
        if (it != cats.end()) ++h.counts[static_cast<std::size_t>(it - cats.begin())];
      });
      bundle.histograms.push_back(std::move(h));
    };
    for (const auto& [pop, matrix] : populations) {
      const auto kind_of = parse_population(pop);
      histogram(pop, [&](auto&& add) {
        for (const auto& t : gtasks) {
          for (const auto& h : t.human_labels) {
            if (h.population == kind_of) add(h.label);
          }
        }
      });
    }
    for (const auto& [label, gruns] : restricted_by_label) {
      histogram(label, [&](auto&& add) {
        for (const auto& run : gruns) {
          for (const auto& rec : run.records) {
            if (rec.parsed_label) add(*rec.parsed_label);
          }
        }
      });
    }
  }

  for (const auto& c : configs) {
    std::size_t covered = 0;
    for (const auto& [g, gtasks] : groups) {
      std::set<std::string> ids;
      for (const auto& t : gtasks) ids.insert(t.id);
      for (const auto& rec : c.runs.front().records) covered += ids.count(rec.task_id);
    }
    if (covered < c.runs.front().records.size()) {
      bundle.notes.push_back(fmt::format("{}: {} stored records refer to tasks outside the task file",
                                         c.label, c.runs.front().records.size() - covered));
    }
  }
  return bundle;
}

ReportBundle ratings_report(const RatingMatrix& matrix, const std::string& name,
                            const ReportOptions& options) {
  ReportBundle bundle;
  bundle.mode = options.mode;
  bundle.scales.emplace(name, matrix.scale());
  InterRaterRow row{name, "all raters", "all raters", matrix.unit_count(), {}, std::nullopt};
  row.alpha = alpha_cell([&] { return *with_ci(krippendorff_alpha(matrix, options.mode), matrix, options); });
  try {
    row.accuracy = pairwise_agreement(matrix);
  } catch (const UndefinedAgreement&) {
  }
  bundle.inter_rater.push_back(std::move(row));
  if (matrix.scale().categorical()) {
    const std::vector<std::string> cats(matrix.scale().categories().begin(),
                                        matrix.scale().categories().end());
    for (std::size_t r = 0; r < matrix.rater_count(); ++r) {
      HistogramRow h{name, matrix.raters()[r], cats, std::vector<std::size_t>(cats.size(), 0)};
      for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
        if (auto v = matrix.cell(u, r)) ++h.counts[static_cast<std::size_t>(*v)];
      }
      bundle.histograms.push_back(std::move(h));
    }
  }
  return bundle;
}

namespace {

nlohmann::json unanimity_json(const UnanimityResult& u) {
  return {{"rate", u.rate ? nlohmann::json(*u.rate) : nlohmann::json(nullptr)},
          {"unanimous", u.unanimous},
          {"considered", u.considered},
          {"excluded", u.excluded}};
}

std::string ci_text(const AlphaCell& cell) {
  if (!cell.report || !cell.report->ci) return "";
  return fmt::format("[{}, {}]", num(cell.report->ci->lo), num(cell.report->ci->hi));
}

TextTable self_table(const ReportBundle& b) {
  TextTable t({"judge", "config", "sampling", "group", "scale", "runs", "tasks", "alpha", "ci",
               "unanimity"});
  for (const auto& r : b.self_reliability) {
    t.add({r.judge, short_hash(r.config_hash), r.sampling_enabled ? "on" : "off", r.group,
           std::string(to_string(b.scales.at(r.group).kind())), std::to_string(r.runs),
           std::to_string(r.tasks), r.alpha.render(), ci_text(r.alpha), num(r.unanimity.rate)});
  }
  return t;
}

TextTable accuracy_table(const ReportBundle& b) {
  TextTable t({"judge", "config", "group", "single_run_mean", "single_run_std", "majority",
               "majority_abstained", "no_sampling"});
  for (const auto& r : b.accuracy) {
    if (!r.summary) {
      t.add({r.judge, short_hash(r.config_hash), r.group, "n/a", "n/a", "n/a", "", "n/a"});
      continue;
    }
    const auto& s = *r.summary;
    t.add({r.judge, short_hash(r.config_hash), r.group, num(s.mean), num(s.stddev), num(s.majority),
           std::to_string(s.majority_abstained), num(s.no_sampling)});
  }
  return t;
}

TextTable dataset_table(const ReportBundle& b) {
  TextTable t({"judge", "config", "dataset", "tasks", "majority"});
  for (const auto& r : b.accuracy_by_dataset) {
    t.add({r.judge, short_hash(r.config_hash), r.dataset, std::to_string(r.tasks), num(r.majority)});
  }
  return t;
}

TextTable inter_table(const ReportBundle& b) {
  TextTable t({"group", "first", "second", "scale", "units", "alpha", "ci", "accuracy"});
  for (const auto& r : b.inter_rater) {
    t.add({r.group, r.first, r.second, std::string(to_string(b.scales.at(r.group).kind())),
           std::to_string(r.units), r.alpha.render(), ci_text(r.alpha), num(r.accuracy)});
  }
  return t;
}

TextTable histogram_table(const ReportBundle& b) {
  TextTable t({"group", "rater", "label", "count"});
  for (const auto& h : b.histograms) {
    for (std::size_t k = 0; k < h.categories.size(); ++k) {
      t.add({h.group, h.rater, h.categories[k], std::to_string(h.counts[k])});
    }
  }
  return t;
}

}  // namespace

nlohmann::json ReportBundle::to_json() const {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  nlohmann::json scales_json = nlohmann::json::object();
  for (const auto& [g, s] : scales) {
    scales_json[g] = {{"scale", s.to_json()}, {"distance", distance_name(s.kind())}};
  }
  j["groups"] = scales_json;

  j["self_reliability"] = nlohmann::json::array();
  for (const auto& r : self_reliability) {
    j["self_reliability"].push_back({{"judge", r.judge},
                                     {"config_hash", r.config_hash},
                                     {"sampling_enabled", r.sampling_enabled},
                                     {"group", r.group},
                                     {"runs", r.runs},
                                     {"tasks", r.tasks},
                                     {"alpha", r.alpha.to_json()},
                                     {"unanimity", unanimity_json(r.unanimity)}});
  }
  j["accuracy"] = nlohmann::json::array();
  for (const auto& r : accuracy) {
    nlohmann::json row = {{"judge", r.judge}, {"config_hash", r.config_hash}, {"group", r.group}};
    if (r.summary) {
      row["balanced_accuracy"] = r.summary->to_json();
    } else {
      row["error"] = r.error;
    }
    j["accuracy"].push_back(std::move(row));
  }
  j["accuracy_by_dataset"] = nlohmann::json::array();
  for (const auto& r : accuracy_by_dataset) {
    nlohmann::json row = {{"judge", r.judge}, {"config_hash", r.config_hash},
                          {"dataset", r.dataset}, {"tasks", r.tasks}};
    row["majority"] = r.majority ? nlohmann::json(*r.majority) : nlohmann::json(nullptr);
    if (!r.error.empty()) row["error"] = r.error;
    j["accuracy_by_dataset"].push_back(std::move(row));
  }
  j["inter_rater"] = nlohmann::json::array();
  for (const auto& r : inter_rater) {
    j["inter_rater"].push_back(
        {{"group", r.group},
         {"first", r.first},
         {"second", r.second},
         {"units", r.units},
         {"alpha", r.alpha.to_json()},
         {"accuracy", r.accuracy ? nlohmann::json(*r.accuracy) : nlohmann::json(nullptr)}});
  }
  j["histograms"] = nlohmann::json::array();
  for (const auto& h : histograms) {
    j["histograms"].push_back(
        {{"group", h.group}, {"rater", h.rater}, {"categories", h.categories}, {"counts", h.counts}});
  }
  j["notes"] = notes;
  return j;
}

std::string ReportBundle::to_text() const {
  std::string out;
  out += fmt::format("Expected disagreement: {}\n", to_string(mode));
  for (const auto& [g, s] : scales) {
    out += fmt::format("Group {}: {} scale, {} distance\n", g, to_string(s.kind()), distance_name(s.kind()));
  }
  auto section = [&](const char* title, const TextTable& t) {
    if (t.empty()) return;
    out += fmt::format("\n{}\n\n", title);
    out += t.render();
  };
  section("Self-reliability (alpha over runs)", self_table(*this));
  section("Balanced accuracy against gold", accuracy_table(*this));
  section("Balanced accuracy of the run majority by dataset", dataset_table(*this));
  section("Inter-rater agreement", inter_table(*this));
  section("Score distributions", histogram_table(*this));
  for (const auto& r : self_reliability) {
    if (!r.alpha.report) out += fmt::format("\nnote: {} {}: {}\n", r.judge, r.group, r.alpha.diagnostic);
  }
  for (const auto& r : inter_rater) {
    if (!r.alpha.report) {
      out += fmt::format("\nnote: {} vs {} {}: {}\n", r.first, r.second, r.group, r.alpha.diagnostic);
    }
  }
  for (const auto& r : accuracy) {
    if (!r.summary) out += fmt::format("\nnote: accuracy {} {}: {}\n", r.judge, r.group, r.error);
  }
  for (const auto& n : notes) out += fmt::format("\nnote: {}\n", n);
  return out;
}

std::map<std::string, std::string> ReportBundle::to_csv() const {
  std::map<std::string, std::string> files;
  files["self_reliability.csv"] = self_table(*this).csv();
  files["accuracy.csv"] = accuracy_table(*this).csv();
  files["accuracy_by_dataset.csv"] = dataset_table(*this).csv();
  files["inter_rater.csv"] = inter_table(*this).csv();
  files["histograms.csv"] = histogram_table(*this).csv();
  return files;
}

void write_report(const ReportBundle& bundle, const fs::path& dir) {
  fs::create_directories(dir);
  auto write = [&](const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  };
  write(dir / "report.json", bundle.to_json().dump(2) + "\n");
  write(dir / "report.txt", bundle.to_text());
  for (const auto& [name, body] : bundle.to_csv()) write(dir / name, body);
}

}  // namespace raterel
