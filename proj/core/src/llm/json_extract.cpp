#include "vinsta/llm/json_extract.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <regex>

#include "vinsta/text.hpp"

namespace vinsta::llm {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// End (one past '}') of the balanced object starting at `open`, or npos.
std::size_t balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      // An apostrophe inside a word is prose, not a string delimiter.
      if (c == '\'' && i > open && is_ident(s[i - 1]) && i + 1 < s.size() && is_ident(s[i + 1])) continue;
      quote = c;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<nlohmann::json> parse_tolerant(std::string_view candidate) {
  auto parsed = nlohmann::json::parse(candidate, nullptr, false);
  if (parsed.is_discarded()) parsed = nlohmann::json::parse(pythonish_to_json(candidate), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  return std::optional<nlohmann::json>(std::in_place, std::move(parsed));
}

std::optional<nlohmann::json> find_key(const nlohmann::json& object, std::string_view key) {
  if (auto it = object.find(std::string(key)); it != object.end()) {
    return std::optional<nlohmann::json>(std::in_place, *it);
  }
  const auto wanted = lower(key);
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (lower(it.key()) == wanted) return std::optional<nlohmann::json>(std::in_place, it.value());
  }
  return std::nullopt;
}

std::optional<nlohmann::json> regex_fallback(std::string_view completion, std::string_view key) {
  std::string escaped;
  for (char c : key) {
    if (!is_ident(c)) escaped += '\\';
    escaped += c;
  }
  const std::regex pattern(
      "[\"']?" + escaped + "[\"']?\\s*:\\s*(\"([^\"]*)\"|'([^']*)'|(-?[0-9]+(?:\\.[0-9]+)?)|([A-Za-z]+))",
      std::regex::icase);
  const std::string haystack(completion);
  std::optional<nlohmann::json> last;
  for (auto it = std::sregex_iterator(haystack.begin(), haystack.end(), pattern); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[2].matched) {
      last.emplace(m[2].str());
    } else if (m[3].matched) {
      last.emplace(m[3].str());
    } else if (m[4].matched) {
      last.emplace(nlohmann::json::parse(m[4].str(), nullptr, false));
    } else {
      last.emplace(m[5].str());
    }
  }
  return last;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = text::trim(s);
  long long value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr == s.data()) return std::nullopt;
  // Accept "3" and "3/3" style answers, reject "3.5" or "3abc".
  if (ptr != end && *ptr != '/' && !std::isspace(static_cast<unsigned char>(*ptr))) return std::nullopt;
  return value;
}

}  // namespace

std::string pythonish_to_json(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 8);
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '"') {
      const std::size_t start = i++;
      while (i < text.size() && text[i] != '"') i += text[i] == '\\' ? 2 : 1;
      out.append(text.substr(start, std::min(i + 1, text.size()) - start));
      ++i;
    } else if (c == '\'') {
      out += '"';
      ++i;
      while (i < text.size() && text[i] != '\'') {
        if (text[i] == '\\' && i + 1 < text.size()) {
          if (text[i + 1] == '\'') {
            out += '\'';
          } else {
            out += text[i];
            out += text[i + 1];
          }
          i += 2;
          continue;
        }
        if (text[i] == '"') out += '\\';
        out += text[i++];
      }
      out += '"';
      ++i;
    } else if (c == ',') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (text[j] == '}' || text[j] == ']')) {
        i = j;
      } else {
        out += c;
        ++i;
      }
    } else if (std::isalpha(static_cast<unsigned char>(c)) && (i == 0 || !is_ident(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && is_ident(text[j])) ++j;
      const auto word = text.substr(i, j - i);
      if (word == "True") {
        out += "true";
      } else if (word == "False") {
        out += "false";
      } else if (word == "None") {
        out += "null";
      } else {
        out.append(word);
      }
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::optional<nlohmann::json> extract_json_field(std::string_view completion, std::string_view key) {
  try {
    for (std::size_t open = completion.rfind('{'); open != std::string_view::npos;
         open = open == 0 ? std::string_view::npos : completion.rfind('{', open - 1)) {
      const auto end = balanced_end(completion, open);
      if (end == std::string_view::npos) continue;
      const auto object = parse_tolerant(completion.substr(open, end - open));
      if (!object) continue;
      if (auto value = find_key(*object, key)) return value;
    }
    return regex_fallback(completion, key);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<int> extract_int_field(std::string_view completion, std::string_view key, int lo, int hi) {
  const auto value = extract_json_field(completion, key);
  if (!value) return std::nullopt;
  std::optional<long long> n;
  if (value->is_number_integer()) {
    n = value->get<long long>();
  } else if (value->is_number_float()) {
    const double d = value->get<double>();
    if (std::isfinite(d) && d == std::floor(d)) n = static_cast<long long>(d);
  } else if (value->is_string()) {
    n = parse_integer(value->get_ref<const std::string&>());
  }
  if (!n || *n < lo || *n > hi) return std::nullopt;
  return static_cast<int>(*n);
}

std::optional<std::size_t> extract_option_field(std::string_view completion, std::string_view key) {
  const auto value = extract_json_field(completion, key);
  if (!value || !value->is_string()) return std::nullopt;
  auto s = text::trim(value->get_ref<const std::string&>());
  if (!s.empty() && s.front() == '(') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(s.front())));
  if (letter < 'A' || letter > 'E') return std::nullopt;
  if (s.size() > 1 && std::isalnum(static_cast<unsigned char>(s[1]))) return std::nullopt;
  return static_cast<std::size_t>(letter - 'A');
}

}  // namespace vinsta::llm
