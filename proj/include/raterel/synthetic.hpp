#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/agreement.hpp"

namespace raterel {

// A simulated rater over labels 0..K-1: copies the gold label with
// probability `fidelity`, otherwise draws from `marginals`.
struct RaterProfile {
  std::vector<double> marginals;
  double fidelity = 0.0;
  std::uint64_t seed = 0;

  // Throws InputError unless marginals lie on the simplex and fidelity in [0, 1].
  void validate() const;
};

// Every item consumes one copy-or-draw uniform and one marginal draw
// regardless of the outcome, so raters sharing a seed stay coupled across
// fidelities.
std::vector<std::size_t> simulate_rater(const RaterProfile& profile,
                                        std::span<const std::size_t> gold);

// Independent draws from `marginals`.
std::vector<std::size_t> sample_labels(std::span<const double> marginals, std::size_t n,
                                       std::uint64_t seed);

// Nominal matrix with labels "0".."K-1", one column per rater.
RatingMatrix labels_to_matrix(std::span<const std::vector<std::size_t>> raters,
                              std::size_t n_labels);

// Fraction of items on which two label vectors coincide.
double raw_agreement(std::span<const std::size_t> a, std::span<const std::size_t> b);

// Derives an independent 64-bit seed for stream `stream` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct ChanceInflationResult {
  std::size_t n_items = 0;
  double fidelity = 0.0;
  double raw_agreement = 0.0;
  double chance_agreement = 0.0;
  AgreementReport alpha;  // carries the bootstrap interval

  nlohmann::json to_json() const;
};

// Two raters with equal marginals and fidelity over `n_items` shared gold
// items, with a bootstrap interval unless bootstrap.replicates is 0. Throws
// InputError if n_items < 100.
ChanceInflationResult chance_inflation_experiment(std::span<const double> marginals,
                                                  std::size_t n_items, std::uint64_t seed,
                                                  double fidelity = 0.0,
                                                  BootstrapOptions bootstrap = {});

struct SweepPoint {
  double fidelity = 0.0;
  double raw_agreement = 0.0;  // mean over rater pairs
  std::optional<double> alpha;  // nullopt when undefined

  nlohmann::json to_json() const;
};

// `n_raters` raters at each fidelity on the same gold items. Rater seeds do
// not depend on the fidelity.
std::vector<SweepPoint> fidelity_sweep(std::span<const double> marginals,
                                       std::span<const double> fidelities, std::size_t n_items,
                                       std::size_t n_raters, std::uint64_t seed,
                                       Execution exec = Execution::parallel);

}  // namespace raterel
