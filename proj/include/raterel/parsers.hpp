#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raterel/task.hpp"

namespace raterel {

// Bumped whenever an extraction rule changes; recorded in run manifests.
inline constexpr std::string_view kParserVersion = "1";

// Outcome of label extraction: exactly one of label / error is set.
struct ParseResult {
  std::optional<std::string> label;
  std::optional<std::string> error;

  bool ok() const noexcept { return label.has_value(); }
  static ParseResult success(std::string label) { return {std::move(label), std::nullopt}; }
  static ParseResult failure(std::string error) { return {std::nullopt, std::move(error)}; }
};

// Last standalone "0" or "1" token.
ParseResult parse_binary(std::string_view text);

// Last integer following the metric name (case-insensitive), which must lie
// in 1-5; otherwise the last standalone integer in 1-5.
ParseResult parse_likert(std::string_view text, LikertMetric metric);

// Last [[A]] / [[B]] / [[C]] marker, mapped to model_a / model_b / tie.
ParseResult parse_verdict(std::string_view text);

inline const std::vector<std::string>& default_reasoning_delimiters() {
  static const std::vector<std::string> d{"</think>"};
  return d;
}

// Text after the last occurrence of any delimiter, or the whole text.
std::string_view strip_reasoning(std::string_view text,
                                 const std::vector<std::string>& delimiters =
                                     default_reasoning_delimiters());

// Strips reasoning and dispatches on the task kind.
ParseResult parse_label(const Task& task, std::string_view text,
                        const std::vector<std::string>& delimiters =
                            default_reasoning_delimiters());

}  // namespace raterel
