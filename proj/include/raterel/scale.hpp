#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace raterel {

enum class ScaleKind { nominal, ordinal, interval };

std::string_view to_string(ScaleKind kind) noexcept;
ScaleKind parse_scale_kind(std::string_view text);

// A value as it appears in an input record, before canonicalization.
using RawValue = std::variant<std::string, double>;

// Value domain of a rating matrix. Nominal and ordinal scales store cells as
// category indices (0-based, in declaration order, which is also the rank
// order for ordinal scales); interval scales store the number itself.
class Scale {
 public:
  static Scale nominal(std::vector<std::string> categories);
  static Scale ordinal(std::vector<std::string> categories);
  static Scale interval(double min, double max);

  static Scale from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  ScaleKind kind() const noexcept { return kind_; }
  bool categorical() const noexcept { return kind_ != ScaleKind::interval; }
  std::span<const std::string> categories() const noexcept { return categories_; }
  std::size_t category_count() const noexcept { return categories_.size(); }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  // Canonical cell value for a raw value, or nullopt if inadmissible.
  std::optional<double> canonicalize(const RawValue& raw) const;
  std::optional<double> canonicalize(std::string_view label) const;
  std::optional<double> canonicalize(const char* label) const { return canonicalize(std::string_view(label)); }
  std::optional<double> canonicalize(const std::string& label) const { return canonicalize(std::string_view(label)); }
  bool admissible(double canonical) const noexcept;
  // Inverse of canonicalize for display.
  std::string label(double canonical) const;

  friend bool operator==(const Scale&, const Scale&) = default;

 private:
  Scale(ScaleKind kind, std::vector<std::string> categories, double min, double max);

  ScaleKind kind_;
  std::vector<std::string> categories_;
  double min_ = 0.0;
  double max_ = 0.0;
};

std::string format_raw(const RawValue& raw);

}  // namespace raterel
