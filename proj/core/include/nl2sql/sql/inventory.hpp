#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nl2sql/sql/ast.hpp"

namespace nl2sql::sql {

/// Scoring-relevant clause counts for one SELECT node. Nested selects
/// (subqueries in any position and compound arms after the first) appear,
/// recursively, in `subqueries` in source order.
struct ClauseInventory {
  std::size_t join_count = 0;
  bool has_group_by = false;
  bool has_order_by = false;
  bool has_having = false;
  // Informational; unweighted by default.
  bool has_limit = false;
  bool has_distinct = false;
  std::size_t aggregate_count = 0;
  std::vector<ClauseInventory> subqueries;

  friend bool operator==(const ClauseInventory&, const ClauseInventory&) = default;
};

ClauseInventory clause_inventory(const QueryAst& ast);
ClauseInventory clause_inventory(const SelectStmt& select);

/// Total number of nested selects at any depth.
std::size_t total_subqueries(const ClauseInventory& inventory);

/// COUNT, SUM, AVG, MIN, MAX, TOTAL, GROUP_CONCAT (case-insensitive).
bool is_aggregate_function(std::string_view name);

}  // namespace nl2sql::sql
