// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "benchmark_files.hpp"
#include "oracle.hpp"
#include "raterel/adapters.hpp"
#include "raterel/agreement.hpp"
#include "raterel/chat_client.hpp"
#include "raterel/consensus.hpp"
#include "raterel/distance.hpp"
#include "raterel/error.hpp"
#include "raterel/harness.hpp"
#include "raterel/self_reliability.hpp"
#include "raterel/synthetic.hpp"
#include "test_util.hpp"

using namespace raterel;

namespace {

// Collects failed checks for one criterion; `detail` summarises what ran.
struct Check {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::optional<double> production_alpha(const RatingMatrix& m, ExpectedMode mode, Execution exec,
                                       AgreementReport* out) {
  try {
    *out = krippendorff_alpha(m, mode, exec);
    return out->alpha;
  } catch (const UndefinedAgreement&) {
    return std::nullopt;
  }
}

void oracle_equivalence(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t matrices = 0, defined = 0, undefined = 0;
  double worst = 0.0;
  for (auto kind : {ScaleKind::nominal, ScaleKind::ordinal, ScaleKind::interval}) {
    for (int i = 0; i < 400; ++i) {
      const auto m = oracle::random_matrix(rng, kind);
      ++matrices;
      for (auto mode : {ExpectedMode::with_replacement, ExpectedMode::without_replacement}) {
        const auto expected = oracle::alpha(m, mode);
        for (auto exec : {Execution::serial, Execution::parallel}) {
          AgreementReport report;
          const auto got = production_alpha(m, mode, exec, &report);
          if (expected.alpha.has_value() != got.has_value()) {
            c.expect(false, fmt::format("{} matrix {} ({}): definedness differs", to_string(kind), i,
                                        to_string(mode)));
            continue;
          }
          if (!got) {
            ++undefined;
            continue;
          }
          ++defined;
          const double err = std::max({oracle::relative_error(*got, *expected.alpha),
                                       oracle::relative_error(report.observed_disagreement, expected.d_o),
                                       oracle::relative_error(report.expected_disagreement, expected.d_e)});
          worst = std::max(worst, err);
          c.expect(err <= 1e-9, fmt::format("{} matrix {} ({}): relative error {:.3g}", to_string(kind),
                                            i, to_string(mode), err));
          c.expect(report.pair_count == expected.pairs, "pair count differs");
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(matrices >= 1000, "fewer than 1000 matrices");
  c.expect(elapsed < 60.0, fmt::format("took {:.1f} s", elapsed));
  c.detail = fmt::format("{} matrices, {} defined / {} undefined comparisons, max rel err {:.2g}, {:.2f} s",
                         matrices, defined, undefined, worst, elapsed);
}

void chance_agreement_example(Check& c) {
  const std::vector<double> skewed{0.95, 0.05};
  const double agree = chance_agreement(skewed);
  c.expect(agree == 0.905, fmt::format("chance_agreement = {:.17g}", agree));

  ValueFrequencies freqs;
  freqs.counts = {{0.0, 95}, {1.0, 5}};
  freqs.total = 100;
  const double d_e = expected_disagreement(freqs, DistanceFunction::nominal(), ExpectedMode::with_replacement);
  c.expect(d_e == 0.095, fmt::format("nominal D_e = {:.17g}", d_e));

  const std::vector<double> uniform3{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const double third = chance_agreement(uniform3);
  c.expect(third == 1.0 / 3.0, fmt::format("uniform three-label = {:.17g}", third));
  c.detail = fmt::format("chance {:.17g}, D_e {:.17g}, uniform {:.17g}", agree, d_e, third);
}

void interval_distance_value(Check& c) {
  const double d = interval_distance(3.0, 4.5);
  c.expect(d == 2.25, fmt::format("interval_distance(3.0, 4.5) = {:.17g}", d));
  c.detail = fmt::format("interval_distance(3.0, 4.5) = {}", d);
}

void chance_inflation(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> marginals{0.95, 0.05};
  BootstrapOptions b;
  b.replicates = 1000;
  b.seed = 7;
  const auto r = chance_inflation_experiment(marginals, 10000, 42, 0.0, b);
  const double elapsed = seconds_since(start);
  c.expect(r.raw_agreement >= 0.89 && r.raw_agreement <= 0.92,
           fmt::format("raw agreement {:.4f}", r.raw_agreement));
  c.expect(r.alpha.ci.has_value(), "no bootstrap interval");
  if (r.alpha.ci) {
    c.expect(r.alpha.ci->lo <= 0.0 && r.alpha.ci->hi >= 0.0,
             fmt::format("CI [{:.4f}, {:.4f}] excludes 0", r.alpha.ci->lo, r.alpha.ci->hi));
  }
  c.expect(elapsed < 30.0, fmt::format("took {:.1f} s", elapsed));
  c.detail = fmt::format("raw {:.4f}, alpha {:.4f}, CI [{:.4f}, {:.4f}], {:.2f} s", r.raw_agreement,
                         r.alpha.alpha, r.alpha.ci ? r.alpha.ci->lo : NAN, r.alpha.ci ? r.alpha.ci->hi : NAN,
                         elapsed);
}

bool same_alpha(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

RatingMatrix permuted(const RatingMatrix& m, std::mt19937_64& rng) {
  std::vector<std::size_t> units(m.unit_count()), raters(m.rater_count());
  std::iota(units.begin(), units.end(), 0);
  std::iota(raters.begin(), raters.end(), 0);
  std::shuffle(units.begin(), units.end(), rng);
  std::shuffle(raters.begin(), raters.end(), rng);
  return m.select_units(units).select_raters(raters);
}

// Nominal matrix with categories renamed by a random permutation.
RatingMatrix relabeled(const RatingMatrix& m, std::mt19937_64& rng) {
  const std::size_t k = m.scale().category_count();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> units(m.units().begin(), m.units().end());
  std::vector<std::string> raters(m.raters().begin(), m.raters().end());
  std::vector<std::optional<double>> cells;
  for (std::size_t u = 0; u < m.unit_count(); ++u) {
    for (std::size_t r = 0; r < m.rater_count(); ++r) {
      const auto v = m.cell(u, r);
      cells.push_back(v ? std::optional<double>(static_cast<double>(perm[static_cast<std::size_t>(*v)])) : std::nullopt);
    }
  }
  return RatingMatrix::from_cells(units, raters, std::move(cells), m.scale());
}

// Adds units carrying at most one rating.
RatingMatrix with_lonely_units(const RatingMatrix& m, std::mt19937_64& rng) {
  std::vector<std::string> units(m.units().begin(), m.units().end());
  std::vector<std::string> raters(m.raters().begin(), m.raters().end());
  std::vector<std::optional<double>> cells;
  for (std::size_t u = 0; u < m.unit_count(); ++u) {
    for (std::size_t r = 0; r < m.rater_count(); ++r) cells.push_back(m.cell(u, r));
  }
  for (int extra = 0; extra < 3; ++extra) {
    units.push_back("lonely" + std::to_string(extra));
    std::vector<std::optional<double>> row(raters.size());
    if (extra > 0) row[rng() % raters.size()] = m.scale().kind() == ScaleKind::interval ? 1.5 : 0.0;
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return RatingMatrix::from_cells(units, raters, std::move(cells), m.scale());
}

void invariants(Check& c) {
  std::mt19937_64 rng(99);
  std::size_t checked = 0;
  for (auto kind : {ScaleKind::nominal, ScaleKind::ordinal, ScaleKind::interval}) {
    for (int i = 0; i < 200; ++i) {
      const auto m = oracle::random_matrix(rng, kind);
      AgreementReport base;
      const auto alpha = production_alpha(m, ExpectedMode::with_replacement, Execution::parallel, &base);
      if (!alpha) continue;
      ++checked;
      const RatingMatrix pairable = pairable_units(m);
      const auto distance = DistanceFunction::for_scale(pairable.scale(), value_frequencies(pairable));
      for (double factor : {0.001, 3.0, 1000.0}) {
        const auto scaled = krippendorff_alpha(m, distance.scaled(factor)).alpha;
        c.expect(same_alpha(scaled, *alpha), fmt::format("delta scaling x{} changed alpha", factor));
      }
      AgreementReport other;
      const auto perm = production_alpha(permuted(m, rng), ExpectedMode::with_replacement, Execution::parallel, &other);
      c.expect(perm && same_alpha(*perm, *alpha), "unit/rater permutation changed alpha");
      if (kind == ScaleKind::nominal) {
        const auto rel = production_alpha(relabeled(m, rng), ExpectedMode::with_replacement, Execution::parallel, &other);
        c.expect(rel && same_alpha(*rel, *alpha), "nominal relabeling changed alpha");
      }
      const auto lonely = production_alpha(with_lonely_units(m, rng), ExpectedMode::with_replacement,
                                           Execution::parallel, &other);
      c.expect(lonely && *lonely == *alpha, "single-rating units changed alpha");
    }
  }

  // Perfect agreement with variation.
  const auto perfect = testutil::matrix({{"a", "a", "a"}, {"b", "b", std::nullopt}, {"c", "c", "c"}},
                                        Scale::ordinal({"a", "b", "c"}));
  for (auto mode : {ExpectedMode::with_replacement, ExpectedMode::without_replacement}) {
    c.expect(krippendorff_alpha(perfect, mode).alpha == 1.0, "perfect agreement is not 1");
  }
  // No variation: undefined, never 1.
  const auto flat = testutil::matrix({{"a", "a"}, {"a", "a"}}, Scale::nominal({"a", "b"}));
  try {
    const auto r = krippendorff_alpha(flat);
    c.expect(false, fmt::format("D_e = 0 returned alpha {}", r.alpha));
  } catch (const UndefinedAgreement& e) {
    c.expect(e.reason() == UndefinedReason::no_variation, "D_e = 0 gave the wrong reason");
  }
  c.detail = fmt::format("{} random matrices through scaling, permutation, relabeling and exclusion checks",
                         checked);
}

std::vector<Task> balanced_binary_tasks(std::size_t n) {
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < n; ++i) {
    Task t;
    t.id = fmt::format("item{:02}", i);
    t.kind = TaskKind::binary_consistency;
    t.document = fmt::format("Source document {}.", i);
    t.summary = fmt::format("Candidate summary {}.", i);
    t.human_labels.push_back({"gold", i % 2 ? "1" : "0", PopulationKind::expert});
    tasks.push_back(t);
  }
  return tasks;
}

void protocol_fidelity(Check& c) {
  const auto tasks = balanced_binary_tasks(10);
  const Scale scale = scale_for(TaskKind::binary_consistency);
  JudgeConfig config;
  config.judge_name = "mock";
  config.model_id = "mock-model";
  config.n_runs = 3;
  config.backoff_initial_s = 0.0;
  config.backoff_max_s = 0.0;

  config.endpoint_url = "mock://hash?labels=0,1";
  RunStore det_store(testutil::temp_dir("acceptance_deterministic"));
  auto det_client = make_chat_client(config);
  const auto det = run_judge(config, tasks, *det_client, det_store);
  const double det_alpha = self_reliability(det, scale).alpha;
  const auto unanimity = unanimity_rate(det);
  c.expect(det.size() == 3, "expected three runs");
  c.expect(det_alpha == 1.0, fmt::format("deterministic alpha {}", det_alpha));
  c.expect(unanimity.rate == 1.0, "deterministic unanimity below 1");
  bool hashes_match = true;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (const auto& run : det) hashes_match &= run.records[i].prompt_hash == det[0].records[i].prompt_hash;
  }
  c.expect(hashes_match, "prompt hashes differ across runs");

  config.endpoint_url = "mock://alternate?labels=0,1";
  RunStore alt_store(testutil::temp_dir("acceptance_alternating"));
  auto alt_client = make_chat_client(config);
  const auto alt = run_judge(config, tasks, *alt_client, alt_store);
  const double alt_alpha = self_reliability(alt, scale).alpha;
  c.expect(alt_alpha <= 0.0, fmt::format("alternating alpha {}", alt_alpha));
  c.detail = fmt::format("deterministic alpha {}, unanimity {}, alternating alpha {:.4f}, hashes {}", det_alpha,
                         *unanimity.rate, alt_alpha, hashes_match ? "identical" : "differ");
}

std::string format_counts(const std::map<std::size_t, std::size_t>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += fmt::format("{}{}:{}", s.empty() ? "" : ", ", k, v);
  return "{" + s + "}";
}

void check_full_mtbench(Check& c, const std::filesystem::path& path, const std::string& label) {
  const auto r = load_mtbench(path, 2);
  c.expect(r.manifest.tasks == 761, fmt::format("{}: {} MT-Bench items kept", label, r.manifest.tasks));
  c.expect(r.manifest.by_human_count == benchfiles::kMtBenchKept,
           fmt::format("{}: vote distribution {}", label, format_counts(r.manifest.by_human_count)));
}

void check_full_summac(Check& c, const std::filesystem::path& path, const std::string& label) {
  const auto r = load_summac(path);
  for (const auto& [dataset, count] : benchfiles::kSummacTest) {
    const auto it = r.manifest.per_dataset.find(dataset);
    const std::size_t got = it == r.manifest.per_dataset.end() ? 0 : it->second;
    c.expect(got == count, fmt::format("{}: {} has {} rows, expected {}", label, dataset, got, count));
  }
}

void loader_counts(Check& c) {
  std::vector<std::string> sources;
  const auto mt = load_mtbench(testutil::fixture("mtbench_small.jsonl"), 2);
  const std::map<std::size_t, std::size_t> mt_expected{{2, 3}, {3, 1}, {4, 1}, {5, 1}};
  c.expect(mt.manifest.tasks == 6 && mt.manifest.dropped == 2, "MT-Bench fixture kept/dropped counts");
  c.expect(mt.manifest.by_human_count == mt_expected,
           fmt::format("MT-Bench fixture distribution {}", format_counts(mt.manifest.by_human_count)));

  const auto sc = load_summac(testutil::fixture("summac_small.jsonl"));
  const std::map<std::string, std::size_t> sc_expected{{"CoGenSumm", 3}, {"XSumFaith", 2}, {"Polytope", 2},
                                                       {"FactCC", 2},    {"SummEval", 2},  {"FRANK", 1}};
  c.expect(sc.manifest.per_dataset == sc_expected, "SummaC fixture per-dataset counts");
  sources.push_back("fixtures");

  const auto dir = testutil::temp_dir("acceptance_full");
  benchfiles::write_mtbench(dir / "mtbench_full.jsonl");
  benchfiles::write_summac(dir / "summac_full.jsonl");
  check_full_mtbench(c, dir / "mtbench_full.jsonl", "full-size MT-Bench file");
  check_full_summac(c, dir / "summac_full.jsonl", "full-size SummaC file");
  sources.push_back("full-size generated files");

  if (const char* p = std::getenv("RATEREL_MTBENCH_FULL"); p && *p) {
    check_full_mtbench(c, p, p);
    sources.push_back("RATEREL_MTBENCH_FULL");
  }
  if (const char* p = std::getenv("RATEREL_SUMMAC_FULL"); p && *p) {
    check_full_summac(c, p, p);
    sources.push_back("RATEREL_SUMMAC_FULL");
  }
  std::string joined;
  for (const auto& s : sources) joined += (joined.empty() ? "" : ", ") + s;
  c.detail = fmt::format("checked {}", joined);
}

JudgeRun labelled_run(std::size_t index, const std::vector<std::string>& labels) {
  JudgeRun run;
  run.judge_name = "judge";
  run.run_index = index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    RunRecord r;
    r.task_id = fmt::format("t{}", i);
    r.parsed_label = labels[i];
    run.records.push_back(r);
  }
  return run;
}

void majority_improvement(Check& c) {
  const std::vector<std::string> truth{"1", "0", "1", "0"};
  std::vector<GoldLabel> gold;
  for (std::size_t i = 0; i < truth.size(); ++i) gold.push_back({fmt::format("t{}", i), truth[i]});
  std::vector<JudgeRun> runs;
  for (std::size_t r = 0; r < 3; ++r) {
    auto labels = truth;
    labels[r] = labels[r] == "1" ? "0" : "1";  // run r errs only on item r
    runs.push_back(labelled_run(r, labels));
  }
  const auto s = per_run_vs_consensus(runs, gold);
  double best = 0.0;
  for (double b : s.per_run) {
    best = std::max(best, b);
    c.expect(s.majority > b, fmt::format("majority {} does not exceed run {}", s.majority, b));
  }
  c.detail = fmt::format("majority {:.4f} vs best single run {:.4f}", s.majority, best);
}

void ordinal_identity(Check& c) {
  std::size_t pairs = 0;
  for (std::size_t count : {1u, 2u, 3u, 7u, 100u, 12345u}) {
    ValueFrequencies f;
    for (int g = 0; g < 5; ++g) f.counts[g] = count;
    f.total = 5 * count;
    const double cc = static_cast<double>(count);
    for (int v = 0; v < 5; ++v) {
      for (int w = 0; w < 5; ++w) {
        const double expected = cc * cc * (v - w) * (v - w);
        const double got = ordinal_distance(v, w, f);
        const double via_fn = DistanceFunction::ordinal(f)(v, w);
        c.expect(got == expected && via_fn == expected,
                 fmt::format("c={} ({}, {}): {} / {} vs {}", count, v, w, got, via_fn, expected));
        ++pairs;
      }
    }
  }
  c.detail = fmt::format("{} category pairs over 6 uniform counts", pairs);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"oracle equivalence on random matrices", oracle_equivalence},
      {"chance agreement and expected disagreement values", chance_agreement_example},
      {"interval distance value", interval_distance_value},
      {"chance-inflation experiment", chance_inflation},
      {"alpha invariants", invariants},
      {"protocol fidelity on mock endpoints", protocol_fidelity},
      {"loader counts", loader_counts},
      {"majority-vote improvement", majority_improvement},
      {"ordinal distance identity", ordinal_identity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      criteria[i].second(check);
    } catch (const std::exception& e) {
      check.failures.push_back(fmt::format("exception: {}", e.what()));
    }
    const bool ok = check.failures.empty();
    failed += !ok;
    std::cout << fmt::format("{} {} {}: {}\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first, check.detail);
    for (std::size_t k = 0; k < check.failures.size() && k < 10; ++k) {
      std::cout << "    " << check.failures[k] << '\n';
    }
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
