#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raterel/task.hpp"

namespace raterel {

enum class PromptVariant { standard, few_shot, cot, both };

std::string_view to_string(PromptVariant variant) noexcept;
PromptVariant parse_prompt_variant(std::string_view text);

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

// Fixed labeled examples for few-shot prompts on binary consistency tasks.
struct FewShotExemplars {
  std::vector<Task> positive;  // label 1, inconsistent
  std::vector<Task> negative;  // label 0, consistent

  // First `per_class` items of each label from `pool`, in pool order.
  // Throws InputError if the pool is short of either label.
  static FewShotExemplars from_pool(std::span<const Task> pool, std::size_t per_class = 5);
};

// Substitutes {{name}} placeholders; throws InputError naming the first
// placeholder with no entry in `fields`.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& fields);

// Messages for one judge call. Binary and Likert tasks yield one user
// message; pairwise tasks yield a system instruction and a user message with
// the conversations (plus the reference block for math items). Throws
// InputError for a missing field or a variant with no template for the kind.
std::vector<ChatMessage> render_prompt(const Task& task, PromptVariant variant,
                                       const FewShotExemplars* exemplars = nullptr);

// SHA-256 (hex) over the role/content bytes of a message list.
std::string prompt_hash(std::span<const ChatMessage> messages);

}  // namespace raterel
