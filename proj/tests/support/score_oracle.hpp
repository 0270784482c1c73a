#pragma once

#include <string>
#include <string_view>

namespace nl2sql::testing {

struct OracleWeights {
  double join = 1, group_by = 1, order_by = 1, having = 1, nesting = 1;
  double limit = 0, distinct = 0, aggregate = 0;
};

/// Scores a SELECT statement straight from its token stream, without any
/// parse tree. Kept deliberately separate from the library implementation.
double oracle_score(std::string_view sql, const OracleWeights& w = {});

/// Number of nested selects at any depth.
int oracle_nested_count(std::string_view sql);

}  // namespace nl2sql::testing
