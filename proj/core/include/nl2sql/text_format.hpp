#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nl2sql {

/// Shortest decimal text that round-trips (2 -> "2", 2.5 -> "2.5").
std::string format_number(double value);

/// Fixed-point with `decimals` digits after the point, half away from zero.
std::string format_fixed(double value, int decimals);

/// numerator / denominator as a percentage with two decimals, computed in
/// integer arithmetic (327/600 -> "54.50"). A zero denominator yields "0.00".
std::string format_percent(std::size_t numerator, std::size_t denominator);

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_escape(std::string_view field);

std::string csv_row(const std::vector<std::string>& fields);

/// Renders a pipe table; every row must have header.size() cells.
std::string markdown_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace nl2sql
