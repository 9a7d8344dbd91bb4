#include "vinsta/llm/cache.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "vinsta/digest.hpp"
#include "vinsta/text.hpp"

namespace vinsta::llm {
namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kUnitSep = '\x1f';

std::string temp_suffix() {
  static std::atomic<unsigned> counter{0};
  std::ostringstream ss;
  ss << ".tmp." << std::this_thread::get_id() << '.' << counter.fetch_add(1);
  return ss.str();
}

}  // namespace

std::string cache_key(std::string_view backend_id, const ChatRequest& request) {
  std::string data;
  data.append(backend_id).push_back(kRecordSep);
  data.append(request.model).push_back(kRecordSep);
  data.append(text::shortest(request.temperature)).push_back(kRecordSep);
  if (request.max_tokens) data.append(std::to_string(*request.max_tokens));
  data.push_back(kRecordSep);
  for (const auto& m : request.messages) {
    data.append(to_string(m.role)).push_back(kUnitSep);
    data.append(m.content).push_back(kRecordSep);
  }
  return sha256_hex(data);
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<Completion> ResponseCache::load(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("text") || !doc["text"].is_string()) return std::nullopt;
  Completion c;
  c.text = doc["text"].get<std::string>();
  c.usage.prompt_tokens = doc.value("prompt_tokens", std::int64_t{0});
  c.usage.completion_tokens = doc.value("completion_tokens", std::int64_t{0});
  c.from_cache = true;
  return c;
}

void ResponseCache::store(const std::string& key, const Completion& completion) const {
  const nlohmann::ordered_json doc = {
      {"text", completion.text},
      {"prompt_tokens", completion.usage.prompt_tokens},
      {"completion_tokens", completion.usage.completion_tokens},
  };
  const auto target = dir_ / (key + ".json");
  auto tmp = target;
  tmp += temp_suffix();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("cannot write cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace vinsta::llm
