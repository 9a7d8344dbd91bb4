#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "vinsta/llm/cache.hpp"
#include "vinsta/llm/chat.hpp"

namespace vinsta::llm {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};

  /// Delay before attempt number `attempt` (1-based, attempt >= 2).
  std::chrono::milliseconds backoff(int attempt) const;
};

struct UsageStats {
  std::int64_t calls = 0;
  std::int64_t remote_calls = 0;
  std::int64_t cache_hits = 0;
  std::int64_t retries = 0;
  std::int64_t failures = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct ClientOptions {
  RetryPolicy retry;
  std::optional<std::filesystem::path> cache_dir;
  /// Upper bound on in-flight backend calls.
  std::size_t max_concurrent = 4;
  /// Sustained request rate for the token bucket; 0 disables rate limiting.
  double requests_per_second = 0.0;
  std::size_t burst = 4;
  /// Injected for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Thread-safe front door to a Backend: request checks, temperature-0
/// caching, retry with exponential backoff, concurrency bound, token-bucket
/// pacing and usage accounting.
class ChatClient {
 public:
  ChatClient(std::shared_ptr<Backend> backend, ClientOptions options = {});

  Completion complete(const ChatRequest& request);

  UsageStats usage() const;
  void write_usage(const std::filesystem::path& path) const;
  const Backend& backend() const noexcept { return *backend_; }

 private:
  Completion call_with_retry(const ChatRequest& request);
  void acquire_slot();
  void release_slot();
  void pace();

  std::shared_ptr<Backend> backend_;
  ClientOptions options_;
  std::optional<ResponseCache> cache_;

  std::mutex slot_mutex_;
  std::condition_variable slot_cv_;
  std::size_t in_flight_ = 0;

  std::mutex bucket_mutex_;
  double tokens_ = 0.0;
  std::chrono::steady_clock::time_point last_refill_;

  std::atomic<std::int64_t> calls_{0};
  std::atomic<std::int64_t> remote_calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
  std::atomic<std::int64_t> retries_{0};
  std::atomic<std::int64_t> failures_{0};
  std::atomic<std::int64_t> prompt_tokens_{0};
  std::atomic<std::int64_t> completion_tokens_{0};
};

/// Per-task view of a shared client: fixes the model name and counts the
/// calls made on behalf of one task.
class Session {
 public:
  Session(ChatClient& client, std::string model) : client_(client), model_(std::move(model)) {}

  Completion ask(std::string prompt, double temperature);

  std::int64_t calls() const noexcept { return calls_.load(); }
  std::int64_t cache_hits() const noexcept { return cache_hits_.load(); }
  std::int64_t prompt_tokens() const noexcept { return prompt_tokens_.load(); }
  std::int64_t completion_tokens() const noexcept { return completion_tokens_.load(); }

 private:
  ChatClient& client_;
  std::string model_;
  std::atomic<std::int64_t> calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
  std::atomic<std::int64_t> prompt_tokens_{0};
  std::atomic<std::int64_t> completion_tokens_{0};
};

}  // namespace vinsta::llm
