#include "raterel/parsers.hpp"

#include <cctype>

#include <fmt/format.h>

namespace raterel {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

struct NumberToken {
  std::size_t begin;
  std::size_t end;
};

// Maximal digit runs not glued to letters, underscores or a decimal point.
std::vector<NumberToken> standalone_integers(std::string_view text) {
  std::vector<NumberToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_digit(text[j])) ++j;
    const bool left_ok =
        i == 0 || (!is_word(text[i - 1]) &&
                   !(text[i - 1] == '.' && i >= 2 && is_digit(text[i - 2])));
    const bool right_ok =
        j == text.size() ||
        (!is_word(text[j]) && !(text[j] == '.' && j + 1 < text.size() && is_digit(text[j + 1])));
    if (left_ok && right_ok) tokens.push_back({i, j});
    i = j;
  }
  return tokens;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string clip(std::string_view text) {
  constexpr std::size_t kMax = 80;
  if (text.size() <= kMax) return std::string(text);
  return std::string(text.substr(0, kMax)) + "...";
}

}  // namespace

ParseResult parse_binary(std::string_view text) {
  const auto tokens = standalone_integers(text);
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    const auto tok = text.substr(it->begin, it->end - it->begin);
    if (tok == "0" || tok == "1") return ParseResult::success(std::string(tok));
  }
  return ParseResult::failure(fmt::format("no standalone 0/1 in response '{}'", clip(text)));
}

ParseResult parse_likert(std::string_view text, LikertMetric metric) {
  const std::string hay = lower(text);
  const std::string name(to_string(metric));
  const auto tokens = standalone_integers(text);

  // Anchored: the first integer after each mention of the metric name.
  std::optional<NumberToken> anchored;
  for (std::size_t pos = hay.find(name); pos != std::string::npos; pos = hay.find(name, pos + 1)) {
    const std::size_t after = pos + name.size();
    for (const auto& tok : tokens) {
      if (tok.begin < after) continue;
      // Only separators may sit between the name and the number.
      bool adjacent = true;
      for (std::size_t k = after; k < tok.begin; ++k) {
        const char c = text[k];
        if (!(c == ':' || c == '=' || c == '-' || c == '*' || c == ' ' || c == '\t' ||
              c == '\n' || c == '\r')) {
          adjacent = false;
          break;
        }
      }
      if (adjacent) anchored = tok;
      break;
    }
  }
  if (anchored) {
    const auto tok = text.substr(anchored->begin, anchored->end - anchored->begin);
    if (tok.size() == 1 && tok[0] >= '1' && tok[0] <= '5') return ParseResult::success(std::string(tok));
    return ParseResult::failure(fmt::format("{} score {} outside 1-5", name, tok));
  }
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    const auto tok = text.substr(it->begin, it->end - it->begin);
    if (tok.size() == 1 && tok[0] >= '1' && tok[0] <= '5') return ParseResult::success(std::string(tok));
  }
  return ParseResult::failure(fmt::format("no 1-5 score in response '{}'", clip(text)));
}

ParseResult parse_verdict(std::string_view text) {
  std::size_t best = std::string_view::npos;
  char which = 0;
  for (char c : {'A', 'B', 'C'}) {
    const char marker[] = {'[', '[', c, ']', ']', '\0'};
    const std::size_t pos = text.rfind(marker);
    if (pos != std::string_view::npos && (best == std::string_view::npos || pos > best)) {
      best = pos;
      which = c;
    }
  }
  switch (which) {
    case 'A': return ParseResult::success("model_a");
    case 'B': return ParseResult::success("model_b");
    case 'C': return ParseResult::success("tie");
    default: return ParseResult::failure(fmt::format("no [[A]]/[[B]]/[[C]] verdict in '{}'", clip(text)));
  }
}

std::string_view strip_reasoning(std::string_view text, const std::vector<std::string>& delimiters) {
  std::size_t cut = 0;
  bool found = false;
  for (const auto& d : delimiters) {
    if (d.empty()) continue;
    const std::size_t pos = text.rfind(d);
    if (pos != std::string_view::npos && (!found || pos + d.size() > cut)) {
      cut = pos + d.size();
      found = true;
    }
  }
  return found ? text.substr(cut) : text;
}

ParseResult parse_label(const Task& task, std::string_view text,
                        const std::vector<std::string>& delimiters) {
  const auto answer = strip_reasoning(text, delimiters);
  switch (task.kind) {
    case TaskKind::binary_consistency: return parse_binary(answer);
    case TaskKind::likert:
      if (!task.metric) return ParseResult::failure("Likert task has no metric");
      return parse_likert(answer, *task.metric);
    case TaskKind::pairwise_preference: return parse_verdict(answer);
  }
  return ParseResult::failure("unknown task kind");
}

}  // namespace raterel
