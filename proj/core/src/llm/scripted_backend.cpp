#include "vinsta/llm/backends.hpp"

#include <algorithm>
#include <fstream>

namespace vinsta::llm {
namespace {

// Rough token estimate so offline runs report plausible usage.
std::int64_t estimate_tokens(std::string_view s) {
  return static_cast<std::int64_t>((s.size() + 3) / 4);
}

Completion make_completion(const ChatRequest& request, std::string text) {
  Completion c;
  for (const auto& m : request.messages) c.usage.prompt_tokens += estimate_tokens(m.content);
  c.usage.completion_tokens = estimate_tokens(text);
  c.text = std::move(text);
  return c;
}

std::vector<std::string> string_list(const nlohmann::json& value, const char* what) {
  if (value.is_string()) return {value.get<std::string>()};
  if (!value.is_array()) throw ConfigError(std::string("script field '") + what + "' must be a string or array");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw ConfigError(std::string("script field '") + what + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::vector<std::string> queue) : queue_(queue.begin(), queue.end()) {}

ScriptedBackend::ScriptedBackend(Responder responder) : responder_(std::move(responder)) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json(const nlohmann::json& script) {
  if (!script.is_object()) throw ConfigError("LLM script must be a JSON object");
  auto backend = std::make_shared<ScriptedBackend>();
  if (script.contains("queue")) {
    for (auto& s : string_list(script["queue"], "queue")) backend->push(std::move(s));
  }
  if (script.contains("rules")) {
    if (!script["rules"].is_array()) throw ConfigError("script field 'rules' must be an array");
    for (const auto& r : script["rules"]) {
      if (!r.is_object() || !r.contains("responses")) throw ConfigError("each script rule needs 'responses'");
      Rule rule;
      if (r.contains("contains")) rule.contains = string_list(r["contains"], "contains");
      for (auto& s : string_list(r["responses"], "responses")) rule.responses.push_back(std::move(s));
      rule.repeat_last = r.value("repeat_last", false);
      backend->add_rule(std::move(rule));
    }
  }
  return backend;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read LLM script " + path.string());
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("LLM script is not valid JSON: " + path.string());
  return from_json(doc);
}

void ScriptedBackend::add_rule(Rule rule) {
  std::lock_guard lock(mutex_);
  rules_.push_back(std::move(rule));
}

void ScriptedBackend::push(std::string response) {
  std::lock_guard lock(mutex_);
  queue_.push_back(std::move(response));
}

Completion ScriptedBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  if (responder_) {
    if (auto reply = responder_(request)) return make_completion(request, std::move(*reply));
  }
  const std::string& prompt = request.messages.empty() ? std::string() : request.messages.back().content;
  for (auto& rule : rules_) {
    if (rule.responses.empty()) continue;
    const bool matches = std::all_of(rule.contains.begin(), rule.contains.end(),
                                     [&](const std::string& s) { return prompt.find(s) != std::string::npos; });
    if (!matches) continue;
    std::string reply = rule.responses.front();
    if (rule.responses.size() > 1 || !rule.repeat_last) rule.responses.pop_front();
    return make_completion(request, std::move(reply));
  }
  if (queue_.empty()) throw ScriptExhaustedError();
  std::string reply = std::move(queue_.front());
  queue_.pop_front();
  return make_completion(request, std::move(reply));
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

Completion DryRunBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  return make_completion(request, reply_);
}

std::vector<ChatRequest> DryRunBackend::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

}  // namespace vinsta::llm
