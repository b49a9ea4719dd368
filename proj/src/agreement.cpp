#include "raterel/agreement.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "raterel/error.hpp"
#include "raterel/kernels.hpp"

namespace raterel {

std::string_view to_string(ExpectedMode mode) noexcept {
  return mode == ExpectedMode::with_replacement ? "with-replacement" : "without-replacement";
}

ExpectedMode parse_expected_mode(std::string_view text) {
  if (text == "with-replacement" || text == "with_replacement" || text == "with") {
    return ExpectedMode::with_replacement;
  }
  if (text == "without-replacement" || text == "without_replacement" || text == "without") {
    return ExpectedMode::without_replacement;
  }
  throw InputError(fmt::format("unknown expected-disagreement mode '{}'", text));
}

nlohmann::json AgreementReport::to_json() const {
  nlohmann::json j;
  j["alpha"] = alpha;
  j["d_o"] = observed_disagreement;
  j["d_e"] = expected_disagreement;
  j["n_pairs"] = pair_count;
  j["mode"] = std::string(to_string(mode));
  j["scale"] = std::string(to_string(scale));
  if (ci) {
    j["ci"] = {{"lo", ci->lo},         {"hi", ci->hi},     {"level", ci->level},
               {"replicates", ci->replicates}, {"seed", ci->seed}, {"skipped", ci->skipped}};
  }
  return j;
}

namespace {

UndefinedAgreement no_variation() {
  return UndefinedAgreement(UndefinedReason::no_variation,
                            "absence of variation: every pooled value is identical (D_e = 0)");
}

}  // namespace

ObservedDisagreement observed_disagreement(const RatingMatrix& matrix,
                                           const DistanceFunction& distance, Execution exec) {
  const auto table = kernels::TallyTable::from_matrix(matrix);
  const std::size_t pairs = table.pair_count();
  if (pairs == 0) {
    throw UndefinedAgreement(UndefinedReason::no_pairs,
                             "no unit has two ratings; observed disagreement is undefined");
  }
  std::vector<double> sums(table.unit_count());
  kernels::unit_disagreements(table, distance, sums, exec);
  return {kernels::pairwise_sum(sums) / static_cast<double>(pairs), pairs};
}

double expected_disagreement(const ValueFrequencies& freqs, const DistanceFunction& distance,
                             ExpectedMode mode) {
  if (freqs.total < 2) throw InputError("expected disagreement needs N >= 2 pooled values");
  kernels::TallyTable table;
  table.kind = distance.kind();
  std::vector<double> counts;
  for (const auto& [value, n] : freqs.counts) {
    table.values.push_back(value);
    counts.push_back(static_cast<double>(n));
  }
  return kernels::expected_from_counts(table, counts, distance, mode);
}

AgreementReport krippendorff_alpha(const RatingMatrix& matrix, ExpectedMode mode, Execution exec) {
  const RatingMatrix pairable = pairable_units(matrix);
  const auto distance = DistanceFunction::for_scale(pairable.scale(), value_frequencies(pairable));
  return krippendorff_alpha(pairable, distance, mode, exec);
}

AgreementReport krippendorff_alpha(const RatingMatrix& matrix, const DistanceFunction& distance,
                                   ExpectedMode mode, Execution exec) {
  const RatingMatrix pairable = pairable_units(matrix);
  const auto table = kernels::TallyTable::from_matrix(pairable);
  const std::vector<double> counts = kernels::pooled_counts(table);
  const auto distinct = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; });
  if (distinct < 2) throw no_variation();

  std::vector<double> sums(table.unit_count());
  kernels::unit_disagreements(table, distance, sums, exec);
  const std::size_t pairs = table.pair_count();

  AgreementReport report;
  report.observed_disagreement = kernels::pairwise_sum(sums) / static_cast<double>(pairs);
  report.expected_disagreement = kernels::expected_from_counts(table, counts, distance, mode);
  if (!(report.expected_disagreement > 0.0)) throw no_variation();
  report.alpha = 1.0 - report.observed_disagreement / report.expected_disagreement;
  report.pair_count = pairs;
  report.mode = mode;
  report.scale = pairable.scale().kind();
  return report;
}

ConfidenceInterval bootstrap_ci(const RatingMatrix& matrix, ExpectedMode mode,
                                const BootstrapOptions& options) {
  if (options.replicates == 0) throw InputError("bootstrap needs at least one replicate");
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw InputError(fmt::format("confidence level must lie in (0, 1), got {}", options.level));
  }
  const RatingMatrix pairable = pairable_units(matrix);
  const auto table = kernels::TallyTable::from_matrix(pairable);
  const auto alphas = kernels::bootstrap_alphas(table, pairable.scale(), mode, options.replicates,
                                                options.seed, options.exec);
  std::vector<double> valid;
  valid.reserve(alphas.size());
  for (const auto& a : alphas) {
    if (a) valid.push_back(*a);
  }
  if (valid.empty()) throw no_variation();
  std::sort(valid.begin(), valid.end());

  // Linear interpolation between order statistics (Hyndman-Fan type 7).
  auto quantile = [&](double q) {
    const double h = q * static_cast<double>(valid.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, valid.size() - 1);
    return valid[lo] + (h - static_cast<double>(lo)) * (valid[hi] - valid[lo]);
  };
  const double tail = (1.0 - options.level) / 2.0;
  ConfidenceInterval ci;
  ci.lo = quantile(tail);
  ci.hi = quantile(1.0 - tail);
  ci.level = options.level;
  ci.replicates = options.replicates;
  ci.seed = options.seed;
  ci.skipped = options.replicates - valid.size();
  return ci;
}

namespace {

void check_groups(const RatingMatrix& matrix, std::span<const int> group_of_rater) {
  if (group_of_rater.size() != matrix.rater_count()) {
    throw InputError(fmt::format("group assignment covers {} raters, matrix has {}",
                                 group_of_rater.size(), matrix.rater_count()));
  }
  for (int g : group_of_rater) {
    if (g != 0 && g != 1) throw InputError("rater groups must be 0 or 1");
  }
}

}  // namespace

std::size_t cross_pair_count(const RatingMatrix& matrix, std::span<const int> group_of_rater) {
  check_groups(matrix, group_of_rater);
  std::size_t n = 0;
  for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
    std::size_t in_group[2] = {0, 0};
    for (std::size_t r = 0; r < matrix.rater_count(); ++r) {
      if (matrix.cell(u, r)) ++in_group[group_of_rater[r]];
    }
    n += in_group[0] * in_group[1];
  }
  return n;
}

AgreementReport cross_group_alpha(const RatingMatrix& matrix, std::span<const int> group_of_rater,
                                  ExpectedMode mode) {
  check_groups(matrix, group_of_rater);
  std::vector<std::size_t> keep;
  for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
    bool seen[2] = {false, false};
    for (std::size_t r = 0; r < matrix.rater_count(); ++r) {
      if (matrix.cell(u, r)) seen[group_of_rater[r]] = true;
    }
    if (seen[0] && seen[1]) keep.push_back(u);
  }
  if (keep.empty()) {
    throw UndefinedAgreement(UndefinedReason::no_pairs,
                             "no unit is rated by both groups; cross-group agreement is undefined");
  }
  const RatingMatrix pooled = matrix.select_units(keep);
  const ValueFrequencies freqs = value_frequencies(pooled);
  if (freqs.distinct_observed() < 2) throw no_variation();
  const auto distance = DistanceFunction::for_scale(pooled.scale(), freqs);

  std::vector<double> sums(pooled.unit_count(), 0.0);
  std::size_t pairs = 0;
  for (std::size_t u = 0; u < pooled.unit_count(); ++u) {
    for (std::size_t a = 0; a < pooled.rater_count(); ++a) {
      const auto va = pooled.cell(u, a);
      if (!va || group_of_rater[a] != 0) continue;
      for (std::size_t b = 0; b < pooled.rater_count(); ++b) {
        const auto vb = pooled.cell(u, b);
        if (!vb || group_of_rater[b] != 1) continue;
        sums[u] += distance(*va, *vb);
        ++pairs;
      }
    }
  }

  AgreementReport report;
  report.observed_disagreement = kernels::pairwise_sum(sums) / static_cast<double>(pairs);
  report.expected_disagreement = expected_disagreement(freqs, distance, mode);
  if (!(report.expected_disagreement > 0.0)) throw no_variation();
  report.alpha = 1.0 - report.observed_disagreement / report.expected_disagreement;
  report.pair_count = pairs;
  report.mode = mode;
  report.scale = pooled.scale().kind();
  return report;
}

}  // namespace raterel
