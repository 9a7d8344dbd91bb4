#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vinsta/llm/chat.hpp"

namespace vinsta::llm {

/// SHA-256 over backend id, model, temperature and role/content of each
/// message, fields separated by ASCII record/unit separators.
std::string cache_key(std::string_view backend_id, const ChatRequest& request);

/// Content-addressed completion store: one `<key>.json` file per request.
/// Writes go to a temporary file that is renamed into place.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<Completion> load(const std::string& key) const;
  void store(const std::string& key, const Completion& completion) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace vinsta::llm
