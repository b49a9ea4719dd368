#include "raterel/scale.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "raterel/error.hpp"

namespace raterel {

const char* to_string(UndefinedReason reason) noexcept {
  switch (reason) {
    case UndefinedReason::empty_matrix: return "empty_matrix";
    case UndefinedReason::no_pairs: return "no_pairs";
    case UndefinedReason::no_variation: return "no_variation";
  }
  return "unknown";
}

std::string_view to_string(ScaleKind kind) noexcept {
  switch (kind) {
    case ScaleKind::nominal: return "nominal";
    case ScaleKind::ordinal: return "ordinal";
    case ScaleKind::interval: return "interval";
  }
  return "unknown";
}

ScaleKind parse_scale_kind(std::string_view text) {
  if (text == "nominal") return ScaleKind::nominal;
  if (text == "ordinal") return ScaleKind::ordinal;
  if (text == "interval") return ScaleKind::interval;
  throw InputError(fmt::format("unknown scale kind '{}'", text));
}

namespace {

std::string format_number(double x) {
  if (std::isfinite(x) && std::floor(x) == x && std::fabs(x) < 1e15) {
    return fmt::format("{}", static_cast<long long>(x));
  }
  return fmt::format("{}", x);
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::string category_from_json(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return format_number(j.get<double>());
  throw InputError(fmt::format("scale category must be a string or number, got {}", j.dump()));
}

}  // namespace

std::string format_raw(const RawValue& raw) {
  if (const auto* s = std::get_if<std::string>(&raw)) return *s;
  return format_number(std::get<double>(raw));
}

Scale::Scale(ScaleKind kind, std::vector<std::string> categories, double min, double max)
    : kind_(kind), categories_(std::move(categories)), min_(min), max_(max) {
  if (kind_ == ScaleKind::interval) {
    if (!(std::isfinite(min_) && std::isfinite(max_) && min_ < max_)) {
      throw InputError(fmt::format("interval scale needs min < max, got [{}, {}]", min_, max_));
    }
    return;
  }
  if (categories_.empty()) {
    throw InputError(fmt::format("{} scale needs at least one category", to_string(kind_)));
  }
  std::unordered_set<std::string> seen;
  for (const auto& c : categories_) {
    if (c.empty()) throw InputError("scale category labels must be non-empty");
    if (!seen.insert(c).second) {
      throw InputError(fmt::format("duplicate scale category '{}'", c));
    }
  }
  min_ = 0.0;
  max_ = static_cast<double>(categories_.size() - 1);
}

Scale Scale::nominal(std::vector<std::string> categories) {
  return Scale(ScaleKind::nominal, std::move(categories), 0, 0);
}

Scale Scale::ordinal(std::vector<std::string> categories) {
  return Scale(ScaleKind::ordinal, std::move(categories), 0, 0);
}

Scale Scale::interval(double min, double max) {
  return Scale(ScaleKind::interval, {}, min, max);
}

Scale Scale::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InputError("scale header must be an object with a string 'kind'");
  }
  const ScaleKind kind = parse_scale_kind(j["kind"].get<std::string>());
  const char* key = j.contains("categories") ? "categories" : "range";
  if (!j.contains(key) || !j[key].is_array()) {
    throw InputError("scale header needs a 'categories' array");
  }
  const auto& arr = j[key];
  if (kind == ScaleKind::interval) {
    if (arr.size() != 2 || !arr[0].is_number() || !arr[1].is_number()) {
      throw InputError("interval scale needs a numeric [min, max] range");
    }
    return interval(arr[0].get<double>(), arr[1].get<double>());
  }
  std::vector<std::string> categories;
  categories.reserve(arr.size());
  for (const auto& c : arr) categories.push_back(category_from_json(c));
  return Scale(kind, std::move(categories), 0, 0);
}

nlohmann::json Scale::to_json() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind_));
  if (kind_ == ScaleKind::interval) {
    j["categories"] = {min_, max_};
  } else {
    j["categories"] = categories_;
  }
  return j;
}

std::optional<double> Scale::canonicalize(std::string_view label) const {
  if (kind_ == ScaleKind::interval) {
    auto v = parse_number(label);
    if (!v || !admissible(*v)) return std::nullopt;
    return v;
  }
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i] == label) return static_cast<double>(i);
  }
  return std::nullopt;
}

std::optional<double> Scale::canonicalize(const RawValue& raw) const {
  if (const auto* s = std::get_if<std::string>(&raw)) return canonicalize(std::string_view(*s));
  const double x = std::get<double>(raw);
  if (kind_ == ScaleKind::interval) {
    if (!admissible(x)) return std::nullopt;
    return x;
  }
  return canonicalize(std::string_view(format_number(x)));
}

bool Scale::admissible(double canonical) const noexcept {
  if (!std::isfinite(canonical)) return false;
  if (kind_ == ScaleKind::interval) return canonical >= min_ && canonical <= max_;
  return canonical >= 0 && canonical < static_cast<double>(categories_.size()) &&
         std::floor(canonical) == canonical;
}

std::string Scale::label(double canonical) const {
  if (kind_ == ScaleKind::interval) return format_number(canonical);
  if (!admissible(canonical)) return format_number(canonical);
  return categories_[static_cast<std::size_t>(canonical)];
}

}  // namespace raterel
