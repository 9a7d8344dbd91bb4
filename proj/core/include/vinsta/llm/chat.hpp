#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vinsta/error.hpp"

namespace vinsta::llm {

enum class Role { system, user, assistant };

std::string_view to_string(Role role) noexcept;

struct Message {
  Role role = Role::user;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  std::optional<int> max_tokens;

  static ChatRequest user(std::string model, std::string prompt, double temperature);
};

/// Empty when the request is well formed (at least one message, last one
/// from the user, non-negative temperature).
std::optional<std::string> check_request(const ChatRequest& request);

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct Completion {
  std::string text;
  Usage usage;
  bool from_cache = false;
};

/// Errors raised by backends. Retryable ones are retried by ChatClient.
class LlmError : public Error {
 public:
  LlmError(const std::string& what, bool retryable) : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

class TransportError : public LlmError {
 public:
  explicit TransportError(const std::string& what) : LlmError(what, true) {}
};

class RateLimitError : public LlmError {
 public:
  explicit RateLimitError(const std::string& what) : LlmError(what, true) {}
};

class AuthError : public LlmError {
 public:
  explicit AuthError(const std::string& what) : LlmError(what, false) {}
};

class MalformedResponseError : public LlmError {
 public:
  explicit MalformedResponseError(const std::string& what) : LlmError(what, false) {}
};

class ScriptExhaustedError : public LlmError {
 public:
  ScriptExhaustedError() : LlmError("script exhausted", false) {}
};

class Backend {
 public:
  virtual ~Backend() = default;

  /// Stable identifier mixed into cache keys.
  virtual std::string id() const = 0;
  virtual Completion complete(const ChatRequest& request) = 0;
  /// Whether calls leave the process (counted as remote in usage stats).
  virtual bool remote() const { return true; }
};

}  // namespace vinsta::llm
