#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "raterel/distance.hpp"
#include "raterel/rating_matrix.hpp"

namespace raterel {

// How chance pairs are drawn from the pooled values when computing D_e.
enum class ExpectedMode {
  with_replacement,     // sum_v sum_v' p_v p_v' delta(v, v')
  without_replacement,  // n_v (n_v' - [v = v']) / (N (N - 1))
};

std::string_view to_string(ExpectedMode mode) noexcept;
ExpectedMode parse_expected_mode(std::string_view text);

// Selects the serial reference kernels or their OpenMP counterparts. Both
// produce bit-identical results.
enum class Execution { serial, parallel };

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::size_t skipped = 0;  // replicates with D_e = 0
};

struct AgreementReport {
  double alpha = 0.0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  std::size_t pair_count = 0;
  ExpectedMode mode = ExpectedMode::with_replacement;
  ScaleKind scale = ScaleKind::nominal;
  std::optional<ConfidenceInterval> ci;

  nlohmann::json to_json() const;
};

struct ObservedDisagreement {
  double value = 0.0;      // D_o, mean distance over within-unit pairs
  std::size_t pairs = 0;   // n = sum_j C(m_j, 2)
};

// Throws UndefinedAgreement(no_pairs) if no unit carries two ratings.
ObservedDisagreement observed_disagreement(const RatingMatrix& matrix,
                                           const DistanceFunction& distance,
                                           Execution exec = Execution::parallel);

// Throws InputError if N < 2. Returns 0 when a single value is observed.
double expected_disagreement(const ValueFrequencies& freqs, const DistanceFunction& distance,
                             ExpectedMode mode = ExpectedMode::with_replacement);

// alpha = 1 - D_o / D_e with the distance selected by the matrix scale.
// Throws UndefinedAgreement for empty matrices and for D_e = 0.
AgreementReport krippendorff_alpha(const RatingMatrix& matrix,
                                   ExpectedMode mode = ExpectedMode::with_replacement,
                                   Execution exec = Execution::parallel);

// Same, with a caller-supplied distance (e.g. a rescaled one).
AgreementReport krippendorff_alpha(const RatingMatrix& matrix, const DistanceFunction& distance,
                                   ExpectedMode mode = ExpectedMode::with_replacement,
                                   Execution exec = Execution::parallel);

struct BootstrapOptions {
  double level = 0.95;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  Execution exec = Execution::parallel;
};

// Percentile interval from resampling units with replacement. Replicate r
// draws from an RNG stream derived from (seed, r) only, so the result does
// not depend on thread scheduling.
ConfidenceInterval bootstrap_ci(const RatingMatrix& matrix, ExpectedMode mode,
                                const BootstrapOptions& options);

// Cross-group agreement: D_o averages only pairs whose raters sit in
// different groups; D_e pools every cell of units holding at least one such
// pair. `group_of_rater[r]` is 0 or 1.
AgreementReport cross_group_alpha(const RatingMatrix& matrix, std::span<const int> group_of_rater,
                                  ExpectedMode mode = ExpectedMode::with_replacement);

std::size_t cross_pair_count(const RatingMatrix& matrix, std::span<const int> group_of_rater);

}  // namespace raterel
