#include "raterel/prompts.hpp"

#include <fmt/format.h>

#include "raterel/error.hpp"
#include "raterel/hashing.hpp"

namespace raterel {

std::string_view to_string(PromptVariant variant) noexcept {
  switch (variant) {
    case PromptVariant::standard: return "default";
    case PromptVariant::few_shot: return "few_shot";
    case PromptVariant::cot: return "cot";
    case PromptVariant::both: return "both";
  }
  return "unknown";
}

PromptVariant parse_prompt_variant(std::string_view text) {
  if (text == "default" || text == "standard") return PromptVariant::standard;
  if (text == "few_shot") return PromptVariant::few_shot;
  if (text == "cot") return PromptVariant::cot;
  if (text == "both") return PromptVariant::both;
  throw InputError(fmt::format("unknown prompt variant '{}'", text));
}

namespace {

constexpr std::string_view kBinaryInstructions =
    "Task: Analyze the summary for factual inconsistencies against the source document. "
    "Inconsistencies can be due to:\n"
    "1. Hallucinations: Information added not in the source.\n"
    "2. Contradictions: Statements opposing source content.\n"
    "3. Entity Errors: Incorrect names/roles/locations.\n"
    "4. Omissions: Key points missing from the summary.\n"
    "5. Temporal Errors: Wrong sequence/timeframe of events.\n"
    "\n"
    "Output: A single number 0 for consistent summary and 1 for inconsistent summary.\n";

constexpr std::string_view kBinaryItem =
    "\n"
    "Document: {{document}}\n"
    "\n"
    "Summary: {{summary}}";

constexpr std::string_view kCotInstruction =
    "\nThink step by step before answering, then end your response with the final answer.\n";

struct LikertCriteria {
  std::string_view title;
  std::string_view criterion;
  std::string_view steps[3];
};

LikertCriteria likert_criteria(LikertMetric metric) {
  switch (metric) {
    case LikertMetric::coherence:
      return {"Coherence",
              "how well the summary is structured and logically organized.",
              {"Read article and identify key points.",
               "Check if summary presents them clearly and logically.", "Score 1–5."}};
    case LikertMetric::consistency:
      return {"Consistency",
              "the summary should not contradict the source; penalize hallucinated facts.",
              {"Read article and summary.", "Identify any factual errors.", "Score 1–5."}};
    case LikertMetric::fluency:
      return {"Fluency",
              "grammar, spelling, punctuation, word choice, and sentence structure.",
              {"Read the summary.", "Identify language issues affecting readability.",
               "Score 1–5."}};
    case LikertMetric::relevance:
      return {"Relevance",
              "includes only important information from the source; penalize redundancy.",
              {"Read summary and article.", "Assess coverage of key points.", "Score 1–5."}};
  }
  throw InputError("unknown Likert metric");
}

std::string likert_template(LikertMetric metric, bool cot) {
  const auto c = likert_criteria(metric);
  std::string t = fmt::format(
      "Instructions: You will be given one summary written for a news article.\n"
      "\n"
      "Your task is to rate the summary on one metric.\n"
      "\n"
      "Evaluation Criteria: {} (1–5) – {}\n"
      "\n"
      "Evaluation Steps:\n"
      "1. {}\n"
      "2. {}\n"
      "3. {}\n",
      c.title, c.criterion, c.steps[0], c.steps[1], c.steps[2]);
  if (cot) t += kCotInstruction;
  // The fluency form shows the summary only; the other three include the article.
  if (metric == LikertMetric::fluency) {
    t += "\nExample:\n\nSummary:\n{{summary}}\n\nEvaluation Form (scores ONLY):\n";
  } else {
    t += "\nExample:\nNews Article:\n{{document}}\nSummary:\n{{summary}}\n"
         "Evaluation Form (scores ONLY):\n";
  }
  t += fmt::format("{}:", c.title);
  return t;
}

constexpr std::string_view kPairMathSystem =
    "Please act as an impartial judge and evaluate the quality of the responses provided by two "
    "AI assistants to the user questions. Your evaluation should consider correctness and "
    "helpfulness. You will be given reference answers, the assistant A's answers, the assistant "
    "B's answers. Your job is to determine which assistant provides correct and helpful answers "
    "to the second user question. Begin your evaluation by comparing both assistants' answers "
    "with the reference answers. Identify and correct any mistakes. Avoid any position biases and "
    "ensure that the order in which the responses were presented does not influence your "
    "decision. Do not allow the length of the responses to influence your evaluation. Do not "
    "favor certain names of the assistants. Be as objective as possible. After providing your "
    "explanation, output your final verdict by strictly following this format: \"[[A]]\" if "
    "assistant A is better, \"[[B]]\" if assistant B is better, and \"[[C]]\" for a tie.";

constexpr std::string_view kPairGeneralSystem =
    "Please act as an impartial judge and evaluate the quality of the responses provided by two "
    "AI assistants to the user questions. You should choose the assistant that follows the "
    "user's instructions and answers the user's questions better. Your evaluation should "
    "consider factors such as the helpfulness, relevance, accuracy, depth, creativity, and level "
    "of detail of their responses. You should focus on who provides a better answer to the "
    "second user question. Begin your evaluation by comparing the responses of the two "
    "assistants and provide a short explanation. Avoid any position biases and ensure that the "
    "order in which the responses were presented does not influence your decision. Do not allow "
    "the length of the responses to influence your evaluation. Do not favor certain names of the "
    "assistants. Be as objective as possible. After providing your explanation, output your "
    "final verdict by strictly following this format: \"[[A]]\" if assistant A is better, "
    "\"[[B]]\" if assistant B is better, and \"[[C]]\" for a tie.";

constexpr std::string_view kReferenceBlock =
    "<|The Start of Reference Answer|>\n"
    "\n"
    "### User:\n{{question_1}}\n"
    "\n"
    "### Reference answer:\n{{ref_answer_1}}\n"
    "\n"
    "### User:\n{{question_2}}\n"
    "\n"
    "### Reference answer:\n{{ref_answer_2}}\n"
    "\n"
    "<|The End of Reference Answer|>\n"
    "\n"
    "\n";

constexpr std::string_view kConversationBlocks =
    "<|The Start of Assistant A's Conversation with User|>\n"
    "\n"
    "### User:\n{{question_1}}\n"
    "\n"
    "### Assistant A:\n{{answer_a_1}}\n"
    "\n"
    "### User:\n{{question_2}}\n"
    "\n"
    "### Assistant A:\n{{answer_a_2}}\n"
    "\n"
    "<|The End of Assistant A's Conversation with User|>\n"
    "\n"
    "\n"
    "<|The Start of Assistant B's Conversation with User|>\n"
    "\n"
    "### User:\n{{question_1}}\n"
    "\n"
    "### Assistant B:\n{{answer_b_1}}\n"
    "\n"
    "### User:\n{{question_2}}\n"
    "\n"
    "### Assistant B:\n{{answer_b_2}}\n"
    "\n"
    "<|The End of Assistant B's Conversation with User|>";

std::map<std::string, std::string> task_fields(const Task& task) {
  std::map<std::string, std::string> f;
  if (!task.document.empty()) f["document"] = task.document;
  if (!task.summary.empty()) f["summary"] = task.summary;
  auto put_turns = [&](const std::vector<std::string>& turns, const char* prefix) {
    for (std::size_t i = 0; i < turns.size(); ++i) f[fmt::format("{}_{}", prefix, i + 1)] = turns[i];
  };
  put_turns(task.questions, "question");
  put_turns(task.answers_a, "answer_a");
  put_turns(task.answers_b, "answer_b");
  put_turns(task.reference_answers, "ref_answer");
  return f;
}

bool wants_cot(PromptVariant v) { return v == PromptVariant::cot || v == PromptVariant::both; }
bool wants_few_shot(PromptVariant v) {
  return v == PromptVariant::few_shot || v == PromptVariant::both;
}

std::string few_shot_block(const FewShotExemplars& exemplars) {
  std::string block = "\nExamples:\n";
  auto add = [&](const Task& t, std::string_view label) {
    block += render_template(kBinaryItem, task_fields(t));
    block += fmt::format("\nOutput: {}\n", label);
  };
  for (const auto& t : exemplars.positive) add(t, "1");
  for (const auto& t : exemplars.negative) add(t, "0");
  return block;
}

}  // namespace

FewShotExemplars FewShotExemplars::from_pool(std::span<const Task> pool, std::size_t per_class) {
  FewShotExemplars ex;
  for (const auto& t : pool) {
    if (t.kind != TaskKind::binary_consistency || t.human_labels.empty()) continue;
    const auto& label = t.human_labels.front().label;
    if (label == "1" && ex.positive.size() < per_class) ex.positive.push_back(t);
    if (label == "0" && ex.negative.size() < per_class) ex.negative.push_back(t);
  }
  if (ex.positive.size() < per_class || ex.negative.size() < per_class) {
    throw InputError(fmt::format("few-shot pool holds {} positive and {} negative items; need {} "
                                 "of each", ex.positive.size(), ex.negative.size(), per_class));
  }
  return ex;
}

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& fields) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw InputError("unterminated placeholder in template");
    out.append(tmpl.substr(pos, open - pos));
    const std::string name(tmpl.substr(open + 2, close - open - 2));
    auto it = fields.find(name);
    if (it == fields.end()) {
      throw InputError(fmt::format("template placeholder '{{{{{}}}}}' has no value", name));
    }
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::vector<ChatMessage> render_prompt(const Task& task, PromptVariant variant,
                                       const FewShotExemplars* exemplars) {
  const auto fields = task_fields(task);
  switch (task.kind) {
    case TaskKind::binary_consistency: {
      std::string text(kBinaryInstructions);
      if (wants_few_shot(variant)) {
        if (!exemplars) throw InputError("few-shot prompt requested without exemplars");
        text += few_shot_block(*exemplars);
      }
      if (wants_cot(variant)) text += kCotInstruction;
      text += render_template(kBinaryItem, fields);
      return {{"user", std::move(text)}};
    }
    case TaskKind::likert: {
      if (!task.metric) throw InputError(fmt::format("Likert task '{}' has no metric", task.id));
      if (wants_few_shot(variant)) {
        throw InputError("no few-shot template is registered for Likert tasks");
      }
      return {{"user", render_template(likert_template(*task.metric, wants_cot(variant)), fields)}};
    }
    case TaskKind::pairwise_preference: {
      if (wants_few_shot(variant)) {
        throw InputError("no few-shot template is registered for pairwise tasks");
      }
      const bool math = task.category == "math";
      std::string system(math ? kPairMathSystem : kPairGeneralSystem);
      if (wants_cot(variant)) system += " Think step by step before giving your verdict.";
      std::string user;
      if (math) user += render_template(kReferenceBlock, fields);
      user += render_template(kConversationBlocks, fields);
      return {{"system", std::move(system)}, {"user", std::move(user)}};
    }
  }
  throw InputError("unknown task kind");
}

std::string prompt_hash(std::span<const ChatMessage> messages) {
  std::string bytes;
  for (const auto& m : messages) {
    bytes += m.role;
    bytes += '\0';
    bytes += m.content;
    bytes += '\0';
  }
  return sha256_hex(bytes);
}

}  // namespace raterel
