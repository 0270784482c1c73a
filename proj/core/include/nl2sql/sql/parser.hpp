#pragma once

#include <cstddef>
#include <string_view>

#include "nl2sql/sql/ast.hpp"

namespace nl2sql::sql {

struct ParseOptions {
  /// Maximum nesting of expressions and subqueries before parsing gives up.
  std::size_t max_depth = 200;
  /// Accept (and ignore) trailing semicolons after the statement.
  bool allow_trailing_semicolon = true;
};

/// Parses a single SELECT statement (optionally with WITH, compound arms,
/// ORDER BY and LIMIT) in the SQLite dialect used by Spider gold queries.
/// Throws SyntaxError for malformed text and UnsupportedStatement for DML/DDL.
QueryAst parse_sql(std::string_view text, const ParseOptions& options = {});

}  // namespace nl2sql::sql
