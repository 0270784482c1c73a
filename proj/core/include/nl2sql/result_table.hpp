#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace nl2sql {

struct Blob {
  std::vector<std::uint8_t> bytes;
  friend auto operator<=>(const Blob&, const Blob&) = default;
};

/// One cell: NULL, INTEGER, REAL, TEXT or BLOB, as the engine reports it.
using Value = std::variant<std::monostate, std::int64_t, double, std::string, Blob>;

using Row = std::vector<Value>;

/// A fully materialized result set. Every row has columns.size() cells.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

/// Human-readable rendering used in sample lines and diagnostics.
std::string value_to_text(const Value& value);

}  // namespace nl2sql
