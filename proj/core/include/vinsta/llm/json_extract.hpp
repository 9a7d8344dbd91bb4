#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace vinsta::llm {

/// Finds `key` in the last balanced `{...}` object of `completion` that
/// contains it at top level. Accepts single-quoted (Python-style) objects,
/// surrounding prose, code fences and case differences in the key. Falls
/// back to a `'key': value` pattern when no object parses. Never throws;
/// returns nullopt when the key is absent.
std::optional<nlohmann::json> extract_json_field(std::string_view completion, std::string_view key);

/// Integer field restricted to [lo, hi]; numeric strings ("3") are accepted.
std::optional<int> extract_int_field(std::string_view completion, std::string_view key, int lo, int hi);

/// Option letter field mapped to 0..4 (case-folded; "C)" and "c. text" accepted).
std::optional<std::size_t> extract_option_field(std::string_view completion, std::string_view key);

/// Rewrites a Python-literal style object to JSON: single-quoted strings,
/// True/False/None and trailing commas.
std::string pythonish_to_json(std::string_view text);

}  // namespace vinsta::llm
