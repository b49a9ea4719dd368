#pragma once

// Data-parallel kernels behind the agreement module. Every kernel has a
// serial reference path; the parallel path splits the same loop with OpenMP
// and must return bit-identical results.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "raterel/agreement.hpp"

namespace raterel::kernels {

bool openmp_enabled() noexcept;
int max_threads() noexcept;

// Per-unit value tallies of the pairable units, compressed row form.
struct TallyTable {
  ScaleKind kind = ScaleKind::nominal;
  std::vector<double> values;  // categorical: values[i] == i for every category
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> value_index;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> unit_sizes;

  std::size_t unit_count() const noexcept { return unit_sizes.size(); }
  std::size_t pair_count() const noexcept;

  static TallyTable from_matrix(const RatingMatrix& matrix);
};

// Summation by recursive halving; error grows O(log n) instead of O(n).
double pairwise_sum(std::span<const double> xs) noexcept;

// out[u] = sum over within-unit pairs of delta.
void unit_disagreements(const TallyTable& table, const DistanceFunction& distance,
                        std::span<double> out, Execution exec);

// Pooled counts per value-table entry, each unit weighted by weights[u]
// (all ones when weights is empty).
std::vector<double> pooled_counts(const TallyTable& table,
                                  std::span<const std::uint32_t> weights = {});

// D_e from pooled counts over the value table.
double expected_from_counts(const TallyTable& table, std::span<const double> counts,
                            const DistanceFunction& distance, ExpectedMode mode);

// Alpha for each bootstrap replicate; nullopt where D_e = 0.
std::vector<std::optional<double>> bootstrap_alphas(const TallyTable& table, const Scale& scale,
                                                    ExpectedMode mode, std::size_t replicates,
                                                    std::uint64_t seed, Execution exec);

}  // namespace raterel::kernels
