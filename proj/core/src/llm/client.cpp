#include "vinsta/llm/client.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace vinsta::llm {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

ChatRequest ChatRequest::user(std::string model, std::string prompt, double temperature) {
  ChatRequest r;
  r.model = std::move(model);
  r.messages.push_back({Role::user, std::move(prompt)});
  r.temperature = temperature;
  return r;
}

std::optional<std::string> check_request(const ChatRequest& request) {
  if (request.messages.empty()) return "request has no messages";
  if (request.messages.back().role != Role::user) return "last message must come from the user";
  if (!(request.temperature >= 0.0) || !std::isfinite(request.temperature)) return "temperature must be >= 0";
  if (request.max_tokens && *request.max_tokens <= 0) return "max_tokens must be positive";
  return std::nullopt;
}

std::chrono::milliseconds RetryPolicy::backoff(int attempt) const {
  const double factor = std::pow(multiplier, std::max(0, attempt - 2));
  const double ms = std::min(static_cast<double>(max_backoff.count()), initial_backoff.count() * factor);
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

ChatClient::ChatClient(std::shared_ptr<Backend> backend, ClientOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw ParameterError("ChatClient needs a backend");
  if (options_.retry.max_attempts < 1) throw ParameterError("retry.max_attempts must be at least 1");
  if (options_.max_concurrent == 0) options_.max_concurrent = 1;
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
  tokens_ = static_cast<double>(std::max<std::size_t>(options_.burst, 1));
  last_refill_ = std::chrono::steady_clock::now();
}

Completion ChatClient::complete(const ChatRequest& request) {
  if (auto problem = check_request(request)) throw ParameterError("invalid chat request: " + *problem);
  ++calls_;

  const bool cacheable = cache_ && request.temperature == 0.0;
  std::string key;
  if (cacheable) {
    key = cache_key(backend_->id(), request);
    if (auto hit = cache_->load(key)) {
      ++cache_hits_;
      return *hit;
    }
  }

  acquire_slot();
  Completion result;
  try {
    result = call_with_retry(request);
  } catch (...) {
    release_slot();
    throw;
  }
  release_slot();

  result.from_cache = false;
  if (backend_->remote()) ++remote_calls_;
  prompt_tokens_ += result.usage.prompt_tokens;
  completion_tokens_ += result.usage.completion_tokens;
  if (cacheable) cache_->store(key, result);
  return result;
}

Completion ChatClient::call_with_retry(const ChatRequest& request) {
  for (int attempt = 1;; ++attempt) {
    pace();
    try {
      return backend_->complete(request);
    } catch (const LlmError& e) {
      if (!e.retryable() || attempt >= options_.retry.max_attempts) {
        ++failures_;
        throw;
      }
      ++retries_;
      options_.sleep(options_.retry.backoff(attempt + 1));
    }
  }
}

void ChatClient::acquire_slot() {
  std::unique_lock lock(slot_mutex_);
  slot_cv_.wait(lock, [&] { return in_flight_ < options_.max_concurrent; });
  ++in_flight_;
}

void ChatClient::release_slot() {
  {
    std::lock_guard lock(slot_mutex_);
    --in_flight_;
  }
  slot_cv_.notify_one();
}

void ChatClient::pace() {
  if (options_.requests_per_second <= 0.0) return;
  const double capacity = static_cast<double>(std::max<std::size_t>(options_.burst, 1));
  for (;;) {
    std::chrono::milliseconds wait{0};
    {
      std::lock_guard lock(bucket_mutex_);
      const auto now = std::chrono::steady_clock::now();
      const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
      last_refill_ = now;
      tokens_ = std::min(capacity, tokens_ + elapsed * options_.requests_per_second);
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::milliseconds(
          static_cast<std::int64_t>(std::ceil((1.0 - tokens_) / options_.requests_per_second * 1000.0)));
    }
    options_.sleep(std::max(wait, std::chrono::milliseconds(1)));
  }
}

UsageStats ChatClient::usage() const {
  UsageStats s;
  s.calls = calls_.load();
  s.remote_calls = remote_calls_.load();
  s.cache_hits = cache_hits_.load();
  s.retries = retries_.load();
  s.failures = failures_.load();
  s.prompt_tokens = prompt_tokens_.load();
  s.completion_tokens = completion_tokens_.load();
  return s;
}

void ChatClient::write_usage(const std::filesystem::path& path) const {
  const auto s = usage();
  const nlohmann::ordered_json doc = {
      {"backend", backend_->id()},       {"calls", s.calls},
      {"remote_calls", s.remote_calls},  {"cache_hits", s.cache_hits},
      {"retries", s.retries},            {"failures", s.failures},
      {"prompt_tokens", s.prompt_tokens}, {"completion_tokens", s.completion_tokens},
  };
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Completion Session::ask(std::string prompt, double temperature) {
  auto completion = client_.complete(ChatRequest::user(model_, std::move(prompt), temperature));
  ++calls_;
  if (completion.from_cache) ++cache_hits_;
  prompt_tokens_ += completion.usage.prompt_tokens;
  completion_tokens_ += completion.usage.completion_tokens;
  return completion;
}

}  // namespace vinsta::llm
