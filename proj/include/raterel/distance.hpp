#pragma once

#include <vector>

#include "raterel/rating_matrix.hpp"
#include "raterel/scale.hpp"

namespace raterel {

// 0 on a match, 1 on any mismatch.
double nominal_distance(double v, double w) noexcept;

// Squared count of pooled cases between two ranks, endpoints half-counted:
//   (sum_{g=min}^{max} n_g - (n_v + n_w) / 2)^2
// `v` and `w` are category indices. Throws InputError if a category between
// them is absent from `freqs`.
double ordinal_distance(double v, double w, const ValueFrequencies& freqs);

double interval_distance(double v, double w) noexcept;

// Scale-selected distance. The ordinal form captures the pooled frequencies
// at construction and evaluates in O(1) through prefix sums.
class DistanceFunction {
 public:
  static DistanceFunction nominal();
  static DistanceFunction ordinal(const ValueFrequencies& freqs);
  static DistanceFunction interval();
  static DistanceFunction for_scale(const Scale& scale, const ValueFrequencies& freqs);
  // Same as above with dense per-category counts (index = category).
  static DistanceFunction for_scale(const Scale& scale, std::span<const double> category_counts);

  ScaleKind kind() const noexcept { return kind_; }
  double factor() const noexcept { return factor_; }

  // Uniformly rescaled copy; alpha does not change under positive factors.
  DistanceFunction scaled(double factor) const;

  double operator()(double v, double w) const;

 private:
  explicit DistanceFunction(ScaleKind kind) : kind_(kind) {}

  ScaleKind kind_;
  double factor_ = 1.0;
  // Ordinal only: counts_[g] and prefix_[g] = sum_{h<g} counts_[h]; known_
  // prefix tracks categories absent from the supplied frequencies.
  std::vector<double> counts_;
  std::vector<double> prefix_;
  std::vector<std::size_t> unknown_prefix_;
};

}  // namespace raterel
