#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "raterel/prompts.hpp"

namespace raterel {

struct JudgeConfig;

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  double top_p = 1.0;
  std::optional<std::uint64_t> seed;

  // {model, messages:[{role, content}], temperature, top_p[, seed]}
  nlohmann::json to_json() const;
};

// Content of choices[0].message.content; throws EndpointError on any other
// shape.
std::string parse_chat_response(const std::string& body);

// A chat-completion endpoint. Implementations must be safe to call from
// several threads at once. Failures throw EndpointError.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// OpenAI-compatible endpoint: POST <base>/chat/completions.
class HttpChatClient : public ChatClient {
 public:
  // `api_key` may be empty, in which case no Authorization header is sent.
  HttpChatClient(std::string base_url, std::string api_key, double timeout_s);
  std::string complete(const ChatRequest& request) override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string api_key_;
  double timeout_s_;
};

// Returns the same text for every request.
class ConstantChatClient : public ChatClient {
 public:
  explicit ConstantChatClient(std::string text) : text_(std::move(text)) {}
  std::string complete(const ChatRequest&) override { return text_; }

 private:
  std::string text_;
};

// The k-th request carrying a given prompt gets labels[k % size]. Over
// repeated runs each task therefore cycles through the label list.
class AlternatingChatClient : public ChatClient {
 public:
  explicit AlternatingChatClient(std::vector<std::string> labels);
  std::string complete(const ChatRequest& request) override;

 private:
  std::vector<std::string> labels_;
  std::mutex mutex_;
  std::map<std::string, std::size_t> seen_;
};

// Picks labels[h % size] where h is derived from the prompt hash, so a task
// always gets the same answer while different tasks spread over the labels.
class PromptHashChatClient : public ChatClient {
 public:
  explicit PromptHashChatClient(std::vector<std::string> labels);
  std::string complete(const ChatRequest& request) override;

 private:
  std::vector<std::string> labels_;
};

// Every request fails with a retryable timeout.
class TimeoutChatClient : public ChatClient {
 public:
  std::string complete(const ChatRequest&) override;
};

// HTTP client for http(s) URLs; mock clients for
//   mock://constant?text=<text>
//   mock://alternate?labels=<l1>,<l2>,...
//   mock://hash?labels=<l1>,<l2>,...
//   mock://timeout
// Throws ConfigError for anything else.
std::unique_ptr<ChatClient> make_chat_client(const JudgeConfig& config);

}  // namespace raterel
