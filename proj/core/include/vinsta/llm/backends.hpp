#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsta/llm/chat.hpp"

namespace vinsta::llm {

/// Deterministic backend for tests and offline runs.
///
/// Responses come from, in order: the responder callback (if it returns a
/// value), the first rule whose substrings all occur in the last user
/// message, then the plain queue. Each rule keeps its own response queue;
/// with `repeat_last` the final response is served forever.
class ScriptedBackend : public Backend {
 public:
  using Responder = std::function<std::optional<std::string>(const ChatRequest&)>;

  struct Rule {
    std::vector<std::string> contains;
    std::deque<std::string> responses;
    bool repeat_last = false;
  };

  ScriptedBackend() = default;
  explicit ScriptedBackend(std::vector<std::string> queue);
  explicit ScriptedBackend(Responder responder);

  /// Script document: {"queue": [...], "rules": [{"contains": str|[str],
  /// "responses": [...], "repeat_last": bool}]}.
  static std::shared_ptr<ScriptedBackend> from_json(const nlohmann::json& script);
  static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

  void add_rule(Rule rule);
  void push(std::string response);

  std::string id() const override { return "scripted"; }
  bool remote() const override { return false; }
  Completion complete(const ChatRequest& request) override;

  std::vector<ChatRequest> requests() const;

 private:
  mutable std::mutex mutex_;
  Responder responder_;
  std::vector<Rule> rules_;
  std::deque<std::string> queue_;
  std::vector<ChatRequest> requests_;
};

/// Records every request and answers with a fixed placeholder; used by
/// --dry-run to render all prompts without contacting a model.
class DryRunBackend : public Backend {
 public:
  explicit DryRunBackend(std::string reply = "(dry run)") : reply_(std::move(reply)) {}

  std::string id() const override { return "dry-run"; }
  bool remote() const override { return false; }
  Completion complete(const ChatRequest& request) override;

  std::vector<ChatRequest> requests() const;

 private:
  std::string reply_;
  mutable std::mutex mutex_;
  std::vector<ChatRequest> requests_;
};

struct HttpBackendOptions {
  /// e.g. "https://api.openai.com/v1" or "http://127.0.0.1:8000/v1".
  std::string base_url;
  /// Name of the environment variable holding the bearer credential.
  std::string api_key_env = "VINSTA_API_KEY";
  /// Explicit credential; overrides api_key_env when set.
  std::optional<std::string> api_key;
  std::chrono::seconds timeout{120};
};

/// Chat-completions compatible HTTP client (POST {base}/chat/completions).
/// 401/403 raise AuthError, 429 RateLimitError, 5xx and connection failures
/// TransportError, unparseable bodies MalformedResponseError.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  /// Base URL from VINSTA_BASE_URL (fallback: OpenAI) and key env name as given.
  static HttpBackendOptions options_from_env(std::string api_key_env = "VINSTA_API_KEY");

  std::string id() const override;
  Completion complete(const ChatRequest& request) override;

  /// Request body as sent on the wire.
  static nlohmann::json request_body(const ChatRequest& request);
  /// Parses a chat-completions response body; throws MalformedResponseError.
  static Completion parse_response(const std::string& body);

 private:
  HttpBackendOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace vinsta::llm
