#include "raterel/rating_matrix.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

#include "raterel/error.hpp"

namespace raterel {

RatingMatrix::RatingMatrix(std::vector<std::string> units, std::vector<std::string> raters,
                           std::vector<std::optional<double>> cells, Scale scale)
    : units_(std::move(units)),
      raters_(std::move(raters)),
      cells_(std::move(cells)),
      scale_(std::move(scale)) {}

RatingMatrix RatingMatrix::build(std::span<const Rating> records, Scale scale) {
  std::vector<std::string> units;
  std::vector<std::string> raters;
  std::unordered_map<std::string, std::size_t> unit_index;
  std::unordered_map<std::string, std::size_t> rater_index;
  struct Placed {
    std::size_t unit;
    std::size_t rater;
    double value;
  };
  std::vector<Placed> placed;
  placed.reserve(records.size());

  for (const auto& r : records) {
    auto value = scale.canonicalize(r.value);
    if (!value) {
      throw InputError(fmt::format("inadmissible value '{}' for unit '{}', rater '{}' under {} scale",
                                   format_raw(r.value), r.unit, r.rater, to_string(scale.kind())));
    }
    auto [uit, unew] = unit_index.try_emplace(r.unit, units.size());
    if (unew) units.push_back(r.unit);
    auto [rit, rnew] = rater_index.try_emplace(r.rater, raters.size());
    if (rnew) raters.push_back(r.rater);
    placed.push_back({uit->second, rit->second, *value});
  }

  std::vector<std::optional<double>> cells(units.size() * raters.size());
  for (const auto& p : placed) {
    auto& cell = cells[p.unit * raters.size() + p.rater];
    if (cell) {
      throw InputError(fmt::format("duplicate cell for unit '{}', rater '{}'", units[p.unit],
                                   raters[p.rater]));
    }
    cell = p.value;
  }
  return RatingMatrix(std::move(units), std::move(raters), std::move(cells), std::move(scale));
}

RatingMatrix RatingMatrix::from_cells(std::vector<std::string> units,
                                      std::vector<std::string> raters,
                                      std::vector<std::optional<double>> cells, Scale scale) {
  if (cells.size() != units.size() * raters.size()) {
    throw InputError(fmt::format("cell grid has {} entries, expected {} x {}", cells.size(),
                                 units.size(), raters.size()));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] && !scale.admissible(*cells[i])) {
      const std::size_t u = i / raters.size();
      const std::size_t r = i % raters.size();
      throw InputError(fmt::format("inadmissible value '{}' for unit '{}', rater '{}'",
                                   *cells[i], units[u], raters[r]));
    }
  }
  return RatingMatrix(std::move(units), std::move(raters), std::move(cells), std::move(scale));
}

std::size_t RatingMatrix::present_in_unit(std::size_t unit) const {
  const auto row = std::span(cells_).subspan(unit * raters_.size(), raters_.size());
  return static_cast<std::size_t>(std::count_if(row.begin(), row.end(),
                                                [](const auto& c) { return c.has_value(); }));
}

std::size_t RatingMatrix::cell_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.has_value(); }));
}

RatingMatrix RatingMatrix::select_units(std::span<const std::size_t> unit_indices) const {
  std::vector<std::string> units;
  std::vector<std::optional<double>> cells;
  units.reserve(unit_indices.size());
  cells.reserve(unit_indices.size() * raters_.size());
  for (std::size_t u : unit_indices) {
    units.push_back(units_.at(u));
    for (std::size_t r = 0; r < raters_.size(); ++r) cells.push_back(cell(u, r));
  }
  return RatingMatrix(std::move(units), raters_, std::move(cells), scale_);
}

RatingMatrix RatingMatrix::select_raters(std::span<const std::size_t> rater_indices) const {
  std::vector<std::string> raters;
  raters.reserve(rater_indices.size());
  for (std::size_t r : rater_indices) raters.push_back(raters_.at(r));
  std::vector<std::optional<double>> cells;
  cells.reserve(units_.size() * rater_indices.size());
  for (std::size_t u = 0; u < units_.size(); ++u) {
    for (std::size_t r : rater_indices) cells.push_back(cell(u, r));
  }
  return RatingMatrix(units_, std::move(raters), std::move(cells), scale_);
}

RatingMatrix pairable_units(const RatingMatrix& matrix) {
  std::vector<std::size_t> keep;
  for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
    if (matrix.present_in_unit(u) >= 2) keep.push_back(u);
  }
  if (keep.empty()) {
    throw UndefinedAgreement(UndefinedReason::empty_matrix,
                             "no unit has two or more ratings; agreement is undefined");
  }
  if (keep.size() == matrix.unit_count()) return matrix;
  return matrix.select_units(keep);
}

std::size_t ValueFrequencies::count(double value) const {
  auto it = counts.find(value);
  return it == counts.end() ? 0 : it->second;
}

double ValueFrequencies::probability(double value) const {
  return total == 0 ? 0.0 : static_cast<double>(count(value)) / static_cast<double>(total);
}

std::size_t ValueFrequencies::distinct_observed() const {
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](const auto& kv) { return kv.second > 0; }));
}

ValueFrequencies value_frequencies(const RatingMatrix& matrix) {
  const RatingMatrix pairable = pairable_units(matrix);
  ValueFrequencies freqs;
  const Scale& scale = pairable.scale();
  if (scale.categorical()) {
    for (std::size_t i = 0; i < scale.category_count(); ++i) {
      freqs.counts.emplace(static_cast<double>(i), 0);
    }
  }
  for (std::size_t u = 0; u < pairable.unit_count(); ++u) {
    for (std::size_t r = 0; r < pairable.rater_count(); ++r) {
      if (auto v = pairable.cell(u, r)) {
        ++freqs.counts[*v];
        ++freqs.total;
      }
    }
  }
  return freqs;
}

}  // namespace raterel
