#include "raterel/synthetic.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "raterel/consensus.hpp"
#include "raterel/error.hpp"

namespace raterel {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 64>(rng); }

std::size_t draw(std::span<const double> cdf, double u) {
  for (std::size_t k = 0; k + 1 < cdf.size(); ++k) {
    if (u < cdf[k]) return k;
  }
  return cdf.size() - 1;
}

std::vector<double> cumulative(std::span<const double> marginals) {
  std::vector<double> cdf(marginals.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < marginals.size(); ++k) cdf[k] = acc += marginals[k];
  return cdf;
}

}  // namespace

void RaterProfile::validate() const {
  chance_agreement(marginals);
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw InputError(fmt::format("fidelity {} outside [0, 1]", fidelity));
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  std::mt19937_64 rng(seq);
  return rng();
}

std::vector<std::size_t> simulate_rater(const RaterProfile& profile,
                                        std::span<const std::size_t> gold) {
  profile.validate();
  const auto cdf = cumulative(profile.marginals);
  auto rng = make_engine(profile.seed);
  std::vector<std::size_t> out(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= profile.marginals.size()) {
      throw InputError(fmt::format("gold label {} at item {} outside {} labels", gold[i], i,
                                   profile.marginals.size()));
    }
    const double copy = uniform01(rng);
    const std::size_t sampled = draw(cdf, uniform01(rng));
    out[i] = copy < profile.fidelity ? gold[i] : sampled;
  }
  return out;
}

std::vector<std::size_t> sample_labels(std::span<const double> marginals, std::size_t n,
                                       std::uint64_t seed) {
  chance_agreement(marginals);
  const auto cdf = cumulative(marginals);
  auto rng = make_engine(seed);
  std::vector<std::size_t> out(n);
  for (auto& v : out) v = draw(cdf, uniform01(rng));
  return out;
}

RatingMatrix labels_to_matrix(std::span<const std::vector<std::size_t>> raters,
                              std::size_t n_labels) {
  if (raters.empty()) throw InputError("no raters");
  const std::size_t n = raters.front().size();
  std::vector<std::string> labels(n_labels);
  for (std::size_t k = 0; k < n_labels; ++k) labels[k] = std::to_string(k);
  std::vector<std::string> units(n);
  for (std::size_t i = 0; i < n; ++i) units[i] = fmt::format("item{}", i);
  std::vector<std::string> names(raters.size());
  for (std::size_t r = 0; r < raters.size(); ++r) names[r] = fmt::format("rater{}", r);
  std::vector<std::optional<double>> cells(n * raters.size());
  for (std::size_t r = 0; r < raters.size(); ++r) {
    if (raters[r].size() != n) throw InputError("raters label different numbers of items");
    for (std::size_t i = 0; i < n; ++i) {
      if (raters[r][i] >= n_labels) throw InputError("label outside the label set");
      cells[i * raters.size() + r] = static_cast<double>(raters[r][i]);
    }
  }
  return RatingMatrix::from_cells(std::move(units), std::move(names), std::move(cells),
                                  Scale::nominal(std::move(labels)));
}

double raw_agreement(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InputError("raw agreement needs two equal-length, non-empty label vectors");
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

nlohmann::json ChanceInflationResult::to_json() const {
  return {{"n_items", n_items},
          {"fidelity", fidelity},
          {"raw_agreement", raw_agreement},
          {"chance_agreement", chance_agreement},
          {"alpha", alpha.to_json()}};
}

ChanceInflationResult chance_inflation_experiment(std::span<const double> marginals,
                                                  std::size_t n_items, std::uint64_t seed,
                                                  double fidelity, BootstrapOptions bootstrap) {
  if (n_items < 100) throw InputError(fmt::format("n_items {} below 100", n_items));
  const auto gold = sample_labels(marginals, n_items, derive_seed(seed, 0));
  const std::vector<double> m(marginals.begin(), marginals.end());
  const std::vector<std::vector<std::size_t>> raters{
      simulate_rater({m, fidelity, derive_seed(seed, 1)}, gold),
      simulate_rater({m, fidelity, derive_seed(seed, 2)}, gold)};

  ChanceInflationResult result;
  result.n_items = n_items;
  result.fidelity = fidelity;
  result.raw_agreement = raw_agreement(raters[0], raters[1]);
  result.chance_agreement = chance_agreement(marginals);
  const auto matrix = labels_to_matrix(raters, marginals.size());
  result.alpha = krippendorff_alpha(matrix, ExpectedMode::with_replacement, bootstrap.exec);
  if (bootstrap.replicates > 0) {
    result.alpha.ci = bootstrap_ci(matrix, ExpectedMode::with_replacement, bootstrap);
  }
  return result;
}

nlohmann::json SweepPoint::to_json() const {
  nlohmann::json j = {{"fidelity", fidelity}, {"raw_agreement", raw_agreement}};
  j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
  return j;
}

std::vector<SweepPoint> fidelity_sweep(std::span<const double> marginals,
                                       std::span<const double> fidelities, std::size_t n_items,
                                       std::size_t n_raters, std::uint64_t seed, Execution exec) {
  if (n_raters < 2) throw InputError("fidelity sweep needs at least two raters");
  const auto gold = sample_labels(marginals, n_items, derive_seed(seed, 0));
  const std::vector<double> m(marginals.begin(), marginals.end());
  std::vector<SweepPoint> points(fidelities.size());
  const auto n_points = static_cast<std::ptrdiff_t>(fidelities.size());

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (std::ptrdiff_t p = 0; p < n_points; ++p) {
    try {
      std::vector<std::vector<std::size_t>> raters;
      for (std::size_t r = 0; r < n_raters; ++r) {
        raters.push_back(simulate_rater({m, fidelities[p], derive_seed(seed, r + 1)}, gold));
      }
      double raw = 0.0;
      std::size_t pairs = 0;
      for (std::size_t a = 0; a < n_raters; ++a) {
        for (std::size_t b = a + 1; b < n_raters; ++b, ++pairs) raw += raw_agreement(raters[a], raters[b]);
      }
      SweepPoint point{fidelities[p], raw / static_cast<double>(pairs), std::nullopt};
      try {
        point.alpha = krippendorff_alpha(labels_to_matrix(raters, m.size()),
                                         ExpectedMode::with_replacement, Execution::serial)
                          .alpha;
      } catch (const UndefinedAgreement&) {
      }
      points[p] = point;
    } catch (...) {
#pragma omp critical(raterel_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

}  // namespace raterel
