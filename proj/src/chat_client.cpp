#include "raterel/chat_client.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include "httplib.h"

#include "raterel/error.hpp"
#include "raterel/judge_config.hpp"

namespace raterel {

nlohmann::json ChatRequest::to_json() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  nlohmann::json j = {
      {"model", model}, {"messages", msgs}, {"temperature", temperature}, {"top_p", top_p}};
  if (seed) j["seed"] = *seed;
  return j;
}

std::string parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(fmt::format("response is not JSON: {}", e.what()));
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw EndpointError("response lacks choices[0].message.content");
  }
}

HttpChatClient::HttpChatClient(std::string base_url, std::string api_key, double timeout_s)
    : api_key_(std::move(api_key)), timeout_s_(timeout_s) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError(fmt::format("endpoint_url '{}' has no scheme", base_url));
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  scheme_host_port_ = base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) {
    throw EndpointError(fmt::format("unsupported endpoint '{}'", scheme_host_port_), false);
  }
  const auto sec = static_cast<time_t>(timeout_s_);
  const auto usec = static_cast<time_t>((timeout_s_ - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(path_prefix_ + "/chat/completions", headers, request.to_json().dump(),
                         "application/json");
  if (!res) {
    throw EndpointError(fmt::format("request to {} failed: {}", scheme_host_port_,
                                    httplib::to_string(res.error())));
  }
  if (res->status == 401 || res->status == 403) {
    throw EndpointError(fmt::format("endpoint rejected credentials (HTTP {})", res->status), false);
  }
  if (res->status != 200) {
    const bool retryable = res->status == 408 || res->status == 429 || res->status >= 500;
    throw EndpointError(fmt::format("endpoint returned HTTP {}", res->status), retryable);
  }
  return parse_chat_response(res->body);
}

AlternatingChatClient::AlternatingChatClient(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw ConfigError("alternating mock needs at least one label");
}

std::string AlternatingChatClient::complete(const ChatRequest& request) {
  std::string key;
  for (const auto& m : request.messages) {
    key += m.role;
    key += '\0';
    key += m.content;
    key += '\0';
  }
  std::lock_guard lock(mutex_);
  const std::size_t k = seen_[key]++;
  return labels_[k % labels_.size()];
}

PromptHashChatClient::PromptHashChatClient(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw ConfigError("hash mock needs at least one label");
}

std::string PromptHashChatClient::complete(const ChatRequest& request) {
  const auto digest = prompt_hash(request.messages);
  const auto h = std::stoull(digest.substr(0, 12), nullptr, 16);
  return labels_[h % labels_.size()];
}

std::string TimeoutChatClient::complete(const ChatRequest&) {
  throw EndpointError("mock endpoint timed out");
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::unique_ptr<ChatClient> make_chat_client(const JudgeConfig& config) {
  const std::string& url = config.endpoint_url;
  constexpr std::string_view kMock = "mock://";
  if (url.rfind(kMock, 0) == 0) {
    const auto rest = url.substr(kMock.size());
    const auto q = rest.find('?');
    const auto kind = rest.substr(0, q);
    httplib::Params params;
    if (q != std::string::npos) httplib::detail::parse_query_text(rest.substr(q + 1), params);
    auto param = [&](const char* name) -> std::string {
      auto it = params.find(name);
      if (it == params.end()) throw ConfigError(fmt::format("mock URL '{}' lacks '{}'", url, name));
      return it->second;
    };
    if (kind == "constant") return std::make_unique<ConstantChatClient>(param("text"));
    if (kind == "alternate") return std::make_unique<AlternatingChatClient>(split_commas(param("labels")));
    if (kind == "hash") return std::make_unique<PromptHashChatClient>(split_commas(param("labels")));
    if (kind == "timeout") return std::make_unique<TimeoutChatClient>();
    throw ConfigError(fmt::format("unknown mock endpoint '{}'", url));
  }
  if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0) {
    const char* key = std::getenv(config.api_key_env.c_str());
    return std::make_unique<HttpChatClient>(url, key ? key : "", config.timeout_s);
  }
  throw ConfigError(fmt::format("endpoint_url '{}' must be http(s):// or mock://", url));
}

}  // namespace raterel
