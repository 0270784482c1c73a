#pragma once

#include <string>

#include "nl2sql/sql/ast.hpp"

namespace nl2sql::sql {

/// Renders an AST back to SQL. Output is canonical: keywords upper case,
/// aliases always introduced by AS, nested operator expressions fully
/// parenthesized. Re-parsing the output yields a structurally equal AST.
std::string to_sql(const QueryAst& ast);
std::string to_sql(const SelectStmt& select);
std::string to_sql(const Expr& expr);

}  // namespace nl2sql::sql
