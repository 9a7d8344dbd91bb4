#include <cstdlib>

#include <httplib.h>

#include "vinsta/llm/backends.hpp"

namespace vinsta::llm {
namespace {

constexpr const char* kDefaultBaseUrl = "https://api.openai.com/v1";

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  std::string url = options_.base_url.empty() ? kDefaultBaseUrl : options_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("base URL lacks a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  options_.base_url = url;
}

HttpBackendOptions HttpBackend::options_from_env(std::string api_key_env) {
  HttpBackendOptions o;
  const char* base = std::getenv("VINSTA_BASE_URL");
  o.base_url = base && *base ? base : kDefaultBaseUrl;
  o.api_key_env = std::move(api_key_env);
  return o;
}

std::string HttpBackend::id() const {
  return "http:" + options_.base_url;
}

nlohmann::json HttpBackend::request_body(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  body["temperature"] = request.temperature;
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  return nlohmann::json::parse(body.dump());
}

Completion HttpBackend::parse_response(const std::string& body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw MalformedResponseError("response body is not a JSON object");
  try {
    const auto& message = doc.at("choices").at(0).at("message");
    Completion c;
    const auto& content = message.at("content");
    c.text = content.is_null() ? std::string() : content.get<std::string>();
    if (doc.contains("usage") && doc["usage"].is_object()) {
      c.usage.prompt_tokens = doc["usage"].value("prompt_tokens", std::int64_t{0});
      c.usage.completion_tokens = doc["usage"].value("completion_tokens", std::int64_t{0});
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponseError(std::string("unexpected response shape: ") + e.what());
  }
}

Completion HttpBackend::complete(const ChatRequest& request) {
  std::string key;
  if (options_.api_key) {
    key = *options_.api_key;
  } else if (const char* env = std::getenv(options_.api_key_env.c_str()); env && *env) {
    key = env;
  } else {
    throw AuthError("no API credential: environment variable " + options_.api_key_env + " is not set");
  }

  httplib::Client client(scheme_host_port_);
  client.set_bearer_token_auth(key);
  const auto seconds = static_cast<time_t>(options_.timeout.count());
  client.set_connection_timeout(seconds, 0);
  client.set_read_timeout(seconds, 0);
  client.set_write_timeout(seconds, 0);

  const auto res = client.Post(path_prefix_ + "/chat/completions", request_body(request).dump(), "application/json");
  if (!res) throw TransportError("HTTP request failed: " + httplib::to_string(res.error()));
  const int status = res->status;
  if (status == 401 || status == 403) throw AuthError("authentication rejected (HTTP " + std::to_string(status) + ")");
  if (status == 429) throw RateLimitError("rate limited (HTTP 429)");
  if (status >= 500) throw TransportError("server error (HTTP " + std::to_string(status) + ")");
  if (status < 200 || status >= 300) {
    throw MalformedResponseError("unexpected HTTP status " + std::to_string(status));
  }
  return parse_response(res->body);
}

}  // namespace vinsta::llm
