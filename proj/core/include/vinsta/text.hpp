#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vinsta::text {

/// Shortest decimal that round-trips, e.g. 63.0 -> "63", 12.5 -> "12.5".
std::string shortest(double value);

/// Fixed-point with `decimals` digits after the point.
std::string fixed(double value, int decimals);

/// "one", "two", ... for 1..20; digits otherwise.
std::string number_word(std::size_t n);

std::string_view trim(std::string_view s) noexcept;

std::string join(const std::vector<std::string>& parts, std::string_view separator);

/// Strips trailing whitespace and a single trailing '.'.
std::string strip_final_period(std::string_view s);

}  // namespace vinsta::text
