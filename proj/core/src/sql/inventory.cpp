#include "nl2sql/sql/inventory.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <string>

namespace nl2sql::sql {

namespace {

constexpr std::string_view kAggregates[] = {"COUNT", "SUM", "AVG", "MIN", "MAX", "TOTAL", "GROUP_CONCAT"};

std::size_t count_joins(const FromClause& from) {
  std::size_t n = from.joins.size();
  if (from.first.group) n += count_joins(*from.first.group);
  for (const auto& j : from.joins) {
    if (j.table.group) n += count_joins(*j.table.group);
  }
  return n;
}

// Aggregates belonging to this select node; subquery bodies are not entered.
std::size_t count_aggregates(const Expr& e) {
  std::size_t n = (e.kind == ExprKind::Function && is_aggregate_function(e.text)) ? 1 : 0;
  for (const auto& a : e.args) n += count_aggregates(a);
  return n;
}

std::size_t count_aggregates(const SelectStmt& s) {
  std::size_t n = 0;
  for (const auto& rc : s.projection) n += count_aggregates(rc.expr);
  if (s.having) n += count_aggregates(*s.having);
  for (const auto& t : s.order_by) n += count_aggregates(t.expr);
  return n;
}

}  // namespace

bool is_aggregate_function(std::string_view name) {
  std::string u(name);
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return std::find(std::begin(kAggregates), std::end(kAggregates), u) != std::end(kAggregates);
}

ClauseInventory clause_inventory(const SelectStmt& s) {
  ClauseInventory inv;
  inv.join_count = s.from ? count_joins(*s.from) : 0;
  inv.has_group_by = !s.group_by.empty();
  inv.has_order_by = !s.order_by.empty();
  inv.has_having = s.having.has_value();
  inv.has_limit = s.limit.has_value();
  inv.has_distinct = s.distinct;
  inv.aggregate_count = count_aggregates(s);
  for (const auto& child : child_selects(s)) inv.subqueries.push_back(clause_inventory(*child.select));
  return inv;
}

ClauseInventory clause_inventory(const QueryAst& ast) { return clause_inventory(ast.root); }

std::size_t total_subqueries(const ClauseInventory& inventory) {
  std::size_t n = inventory.subqueries.size();
  for (const auto& sub : inventory.subqueries) n += total_subqueries(sub);
  return n;
}

}  // namespace nl2sql::sql
