#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raterel/scale.hpp"

namespace raterel {

struct Rating {
  std::string unit;
  std::string rater;
  RawValue value;
};

// Units x raters grid with missing cells. Immutable once built; every derived
// statistic is a pure function of it.
class RatingMatrix {
 public:
  // Units and raters keep first-appearance order. Throws InputError on a
  // duplicate (unit, rater) cell or an inadmissible value.
  static RatingMatrix build(std::span<const Rating> records, Scale scale);

  // Cells are row-major (unit, rater) and already canonical under `scale`.
  static RatingMatrix from_cells(std::vector<std::string> units,
                                 std::vector<std::string> raters,
                                 std::vector<std::optional<double>> cells,
                                 Scale scale);

  const Scale& scale() const noexcept { return scale_; }
  std::span<const std::string> units() const noexcept { return units_; }
  std::span<const std::string> raters() const noexcept { return raters_; }
  std::size_t unit_count() const noexcept { return units_.size(); }
  std::size_t rater_count() const noexcept { return raters_.size(); }

  std::optional<double> cell(std::size_t unit, std::size_t rater) const {
    return cells_[unit * raters_.size() + rater];
  }
  std::size_t present_in_unit(std::size_t unit) const;
  std::size_t cell_count() const;
  bool empty() const noexcept { return units_.empty(); }

  // Sub-matrix with the given units (in the given order); raters unchanged.
  RatingMatrix select_units(std::span<const std::size_t> unit_indices) const;
  // Sub-matrix with the given raters (in the given order); units unchanged.
  RatingMatrix select_raters(std::span<const std::size_t> rater_indices) const;

 private:
  RatingMatrix(std::vector<std::string> units, std::vector<std::string> raters,
               std::vector<std::optional<double>> cells, Scale scale);

  std::vector<std::string> units_;
  std::vector<std::string> raters_;
  std::vector<std::optional<double>> cells_;
  Scale scale_;
};

// Restriction to units with at least two present cells. Throws
// UndefinedAgreement(empty_matrix) when nothing survives.
RatingMatrix pairable_units(const RatingMatrix& matrix);

// Pooled value counts n_v over the cells of pairable units. For categorical
// scales every declared category is present (possibly with count zero) so
// ordinal distances can sum across unused categories.
struct ValueFrequencies {
  std::map<double, std::size_t> counts;
  std::size_t total = 0;

  std::size_t count(double value) const;
  double probability(double value) const;
  std::size_t distinct_observed() const;
};

ValueFrequencies value_frequencies(const RatingMatrix& matrix);

}  // namespace raterel
