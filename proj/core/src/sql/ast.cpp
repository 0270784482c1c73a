#include "nl2sql/sql/ast.hpp"

#include <algorithm>
#include <cctype>

namespace nl2sql::sql {

namespace {

template <typename T>
std::unique_ptr<T> clone(const std::unique_ptr<T>& p) {
  return p ? std::make_unique<T>(*p) : nullptr;
}

template <typename T>
bool deep_equal(const std::unique_ptr<T>& a, const std::unique_ptr<T>& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool iequals(const std::string& a, const std::string& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
  });
}

void collect_from_expr(const Expr& e, SubqueryPosition pos, std::vector<ChildSelect>& out);

void collect_from_exprs(const std::vector<Expr>& es, SubqueryPosition pos, std::vector<ChildSelect>& out) {
  for (const auto& e : es) collect_from_expr(e, pos, out);
}

void collect_from_expr(const Expr& e, SubqueryPosition pos, std::vector<ChildSelect>& out) {
  // InSubquery evaluates its left operand before the subquery.
  collect_from_exprs(e.args, pos, out);
  if (e.subquery) out.push_back({pos, e.subquery.get()});
}

void collect_from_table(const TableRef& t, std::vector<ChildSelect>& out);

void collect_from_clause(const FromClause& from, std::vector<ChildSelect>& out) {
  collect_from_table(from.first, out);
  for (const auto& j : from.joins) {
    collect_from_table(j.table, out);
    if (j.on) collect_from_expr(*j.on, SubqueryPosition::JoinCondition, out);
  }
}

void collect_from_table(const TableRef& t, std::vector<ChildSelect>& out) {
  collect_from_exprs(t.function_args, SubqueryPosition::From, out);
  if (t.subquery) out.push_back({SubqueryPosition::From, t.subquery.get()});
  if (t.group) collect_from_clause(*t.group, out);
}

}  // namespace

Expr::Expr() = default;
Expr::Expr(ExprKind k) : kind(k) {}
Expr::Expr(const Expr& o)
    : kind(o.kind),
      literal(o.literal),
      text(o.text),
      name(o.name),
      qualifier(o.qualifier),
      negated(o.negated),
      distinct(o.distinct),
      has_operand(o.has_operand),
      has_else(o.has_else),
      window(o.window),
      args(o.args),
      subquery(clone(o.subquery)) {}
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(const Expr& o) {
  if (this != &o) *this = Expr(o);
  return *this;
}
Expr& Expr::operator=(Expr&&) noexcept = default;
Expr::~Expr() = default;

TableRef::TableRef() = default;
TableRef::TableRef(const TableRef& o)
    : kind(o.kind),
      schema(o.schema),
      name(o.name),
      alias(o.alias),
      function_args(o.function_args),
      subquery(clone(o.subquery)),
      group(clone(o.group)) {}
TableRef::TableRef(TableRef&&) noexcept = default;
TableRef& TableRef::operator=(const TableRef& o) {
  if (this != &o) *this = TableRef(o);
  return *this;
}
TableRef& TableRef::operator=(TableRef&&) noexcept = default;
TableRef::~TableRef() = default;

SetOperation::SetOperation() = default;
SetOperation::SetOperation(const SetOperation& o) : op(o.op), arm(clone(o.arm)) {}
SetOperation::SetOperation(SetOperation&&) noexcept = default;
SetOperation& SetOperation::operator=(const SetOperation& o) {
  if (this != &o) *this = SetOperation(o);
  return *this;
}
SetOperation& SetOperation::operator=(SetOperation&&) noexcept = default;
SetOperation::~SetOperation() = default;

CommonTableExpr::CommonTableExpr() = default;
CommonTableExpr::CommonTableExpr(const CommonTableExpr& o)
    : name(o.name), columns(o.columns), select(clone(o.select)) {}
CommonTableExpr::CommonTableExpr(CommonTableExpr&&) noexcept = default;
CommonTableExpr& CommonTableExpr::operator=(const CommonTableExpr& o) {
  if (this != &o) *this = CommonTableExpr(o);
  return *this;
}
CommonTableExpr& CommonTableExpr::operator=(CommonTableExpr&&) noexcept = default;
CommonTableExpr::~CommonTableExpr() = default;

std::vector<ChildSelect> child_selects(const SelectStmt& s) {
  std::vector<ChildSelect> out;
  for (const auto& cte : s.with) {
    if (cte.select) out.push_back({SubqueryPosition::With, cte.select.get()});
  }
  for (const auto& rc : s.projection) collect_from_expr(rc.expr, SubqueryPosition::Projection, out);
  if (s.from) collect_from_clause(*s.from, out);
  if (s.where) collect_from_expr(*s.where, SubqueryPosition::Where, out);
  collect_from_exprs(s.group_by, SubqueryPosition::GroupBy, out);
  if (s.having) collect_from_expr(*s.having, SubqueryPosition::Having, out);
  // Arms precede the trailing ORDER BY / LIMIT in source text.
  for (const auto& op : s.compound) {
    if (op.arm) out.push_back({SubqueryPosition::SetOperation, op.arm.get()});
  }
  for (const auto& term : s.order_by) collect_from_expr(term.expr, SubqueryPosition::OrderBy, out);
  if (s.limit) collect_from_expr(*s.limit, SubqueryPosition::Limit, out);
  if (s.offset) collect_from_expr(*s.offset, SubqueryPosition::Limit, out);
  return out;
}

bool operator==(const Identifier& a, const Identifier& b) {
  return a.quote == b.quote && iequals(a.name, b.name);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.negated != b.negated || a.distinct != b.distinct ||
      a.has_operand != b.has_operand || a.has_else != b.has_else) {
    return false;
  }
  if (a.kind == ExprKind::Literal && a.literal != b.literal) return false;
  // Function names, keywords and type names compare case-insensitively;
  // string literal contents do not.
  const bool text_equal = (a.kind == ExprKind::Literal && a.literal == LiteralKind::String) ||
                                  a.kind == ExprKind::Opaque
                              ? a.text == b.text
                              : iequals(a.text, b.text);
  return text_equal && a.name == b.name && a.qualifier == b.qualifier && iequals(a.window, b.window) &&
         a.args == b.args && deep_equal(a.subquery, b.subquery);
}

bool operator==(const ResultColumn& a, const ResultColumn& b) { return a.expr == b.expr && a.alias == b.alias; }

bool operator==(const TableRef& a, const TableRef& b) {
  return a.kind == b.kind && a.schema == b.schema && a.name == b.name && a.alias == b.alias &&
         a.function_args == b.function_args && deep_equal(a.subquery, b.subquery) && deep_equal(a.group, b.group);
}

bool operator==(const Join& a, const Join& b) {
  return a.kind == b.kind && a.natural == b.natural && a.outer_keyword == b.outer_keyword &&
         a.inner_keyword == b.inner_keyword && a.table == b.table && a.on == b.on &&
         a.using_columns == b.using_columns;
}

bool operator==(const FromClause& a, const FromClause& b) { return a.first == b.first && a.joins == b.joins; }

bool operator==(const OrderTerm& a, const OrderTerm& b) {
  return a.expr == b.expr && a.direction == b.direction && a.nulls == b.nulls;
}

bool operator==(const SetOperation& a, const SetOperation& b) { return a.op == b.op && deep_equal(a.arm, b.arm); }

bool operator==(const CommonTableExpr& a, const CommonTableExpr& b) {
  return a.name == b.name && a.columns == b.columns && deep_equal(a.select, b.select);
}

bool operator==(const SelectStmt& a, const SelectStmt& b) {
  return a.recursive_with == b.recursive_with && a.with == b.with && a.distinct == b.distinct && a.all == b.all &&
         a.projection == b.projection && a.from == b.from && a.where == b.where && a.group_by == b.group_by &&
         a.having == b.having && a.order_by == b.order_by && a.limit == b.limit && a.offset == b.offset &&
         a.compound == b.compound;
}

bool operator==(const QueryAst& a, const QueryAst& b) { return a.root == b.root; }

}  // namespace nl2sql::sql
