#include "raterel/distance.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "raterel/error.hpp"

namespace raterel {

double nominal_distance(double v, double w) noexcept { return v == w ? 0.0 : 1.0; }

double interval_distance(double v, double w) noexcept {
  const double d = v - w;
  return d * d;
}

double ordinal_distance(double v, double w, const ValueFrequencies& freqs) {
  if (v == w) return 0.0;
  const double lo = std::min(v, w);
  const double hi = std::max(v, w);
  if (std::floor(lo) != lo || std::floor(hi) != hi || lo < 0) {
    throw InputError(fmt::format("ordinal distance needs category indices, got {} and {}", v, w));
  }
  double between = 0.0;
  for (double g = lo; g <= hi; g += 1.0) {
    auto it = freqs.counts.find(g);
    if (it == freqs.counts.end()) {
      throw InputError(fmt::format("ordinal category {} missing from frequencies", g));
    }
    between += static_cast<double>(it->second);
  }
  const double gap = between - 0.5 * static_cast<double>(freqs.count(v) + freqs.count(w));
  return gap * gap;
}

DistanceFunction DistanceFunction::nominal() { return DistanceFunction(ScaleKind::nominal); }

DistanceFunction DistanceFunction::interval() { return DistanceFunction(ScaleKind::interval); }

DistanceFunction DistanceFunction::ordinal(const ValueFrequencies& freqs) {
  DistanceFunction d(ScaleKind::ordinal);
  double max_key = -1.0;
  for (const auto& [value, n] : freqs.counts) {
    if (value < 0 || std::floor(value) != value) {
      throw InputError(fmt::format("ordinal frequencies must be keyed by category index, got {}", value));
    }
    max_key = std::max(max_key, value);
  }
  const auto k = static_cast<std::size_t>(max_key + 1.0);
  d.counts_.assign(k, 0.0);
  std::vector<bool> known(k, false);
  for (const auto& [value, n] : freqs.counts) {
    const auto g = static_cast<std::size_t>(value);
    d.counts_[g] = static_cast<double>(n);
    known[g] = true;
  }
  d.prefix_.assign(k + 1, 0.0);
  d.unknown_prefix_.assign(k + 1, 0);
  for (std::size_t g = 0; g < k; ++g) {
    d.prefix_[g + 1] = d.prefix_[g] + d.counts_[g];
    d.unknown_prefix_[g + 1] = d.unknown_prefix_[g] + (known[g] ? 0 : 1);
  }
  return d;
}

DistanceFunction DistanceFunction::for_scale(const Scale& scale, const ValueFrequencies& freqs) {
  switch (scale.kind()) {
    case ScaleKind::nominal: return nominal();
    case ScaleKind::ordinal: return ordinal(freqs);
    case ScaleKind::interval: return interval();
  }
  throw InputError("unknown scale kind");
}

DistanceFunction DistanceFunction::for_scale(const Scale& scale,
                                             std::span<const double> category_counts) {
  if (scale.kind() != ScaleKind::ordinal) {
    return scale.kind() == ScaleKind::nominal ? nominal() : interval();
  }
  DistanceFunction d(ScaleKind::ordinal);
  const std::size_t k = category_counts.size();
  d.counts_.assign(category_counts.begin(), category_counts.end());
  d.prefix_.assign(k + 1, 0.0);
  d.unknown_prefix_.assign(k + 1, 0);
  for (std::size_t g = 0; g < k; ++g) d.prefix_[g + 1] = d.prefix_[g] + d.counts_[g];
  return d;
}

DistanceFunction DistanceFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("distance scaling factor must be positive");
  DistanceFunction copy = *this;
  copy.factor_ *= factor;
  return copy;
}

double DistanceFunction::operator()(double v, double w) const {
  switch (kind_) {
    case ScaleKind::nominal: return factor_ * nominal_distance(v, w);
    case ScaleKind::interval: return factor_ * interval_distance(v, w);
    case ScaleKind::ordinal: break;
  }
  if (v == w) return 0.0;
  const auto lo = static_cast<std::size_t>(std::min(v, w));
  const auto hi = static_cast<std::size_t>(std::max(v, w));
  if (hi >= counts_.size() || unknown_prefix_[hi + 1] != unknown_prefix_[lo]) {
    throw InputError(fmt::format("ordinal category between {} and {} missing from frequencies", lo, hi));
  }
  const double gap = prefix_[hi + 1] - prefix_[lo] - 0.5 * (counts_[lo] + counts_[hi]);
  return factor_ * gap * gap;
}

}  // namespace raterel
