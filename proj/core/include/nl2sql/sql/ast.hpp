#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nl2sql::sql {

struct SelectStmt;

/// An identifier as written. `quote` is 0 for bare identifiers, otherwise one
/// of '"', '`' or '[' (bracket quoting closes with ']').
struct Identifier {
  std::string name;
  char quote = 0;
};

enum class LiteralKind { Number, String, Null, Keyword };

enum class ExprKind {
  Literal,         // text = literal value (unquoted for strings)
  Column,          // name, optional qualifier
  Star,            // `*` or `qualifier.*`
  Unary,           // op in {-, +, ~, NOT}; args[0]
  Binary,          // op normalized upper case; args[0], args[1]; negated for NOT LIKE etc.
  Like,            // op in {LIKE, GLOB, REGEXP, MATCH}; args = {lhs, pattern[, escape]}
  Between,         // args = {value, low, high}
  InList,          // args[0] IN (args[1..])
  InSubquery,      // args[0] IN (subquery)
  Exists,          // EXISTS (subquery)
  ScalarSubquery,  // (subquery)
  Function,        // name, distinct, args, optional opaque window clause
  Case,            // has_operand / has_else flags, args laid out [operand] (when then)* [else]
  Cast,            // args[0], text = type name
  Collate,         // args[0], text = collation name
  Postfix,         // op in {ISNULL, NOTNULL}; args[0]
  Tuple,           // (args...)
  Opaque,          // token text preserved verbatim; carries no score
};

struct Expr {
  ExprKind kind = ExprKind::Opaque;
  LiteralKind literal = LiteralKind::Number;
  std::string text;  // literal value, operator, function name, type, collation, opaque text
  Identifier name;   // column name
  std::optional<Identifier> qualifier;
  bool negated = false;
  bool distinct = false;
  bool has_operand = false;
  bool has_else = false;
  std::string window;  // opaque OVER (...) / FILTER (...) text for functions
  std::vector<Expr> args;
  std::unique_ptr<SelectStmt> subquery;

  Expr();
  explicit Expr(ExprKind k);
  Expr(const Expr& other);
  Expr(Expr&&) noexcept;
  Expr& operator=(const Expr& other);
  Expr& operator=(Expr&&) noexcept;
  ~Expr();
};

struct ResultColumn {
  Expr expr;
  std::optional<Identifier> alias;
};

struct FromClause;

enum class TableRefKind { Table, Subquery, Group, Function };

struct TableRef {
  TableRefKind kind = TableRefKind::Table;
  std::optional<Identifier> schema;
  Identifier name;  // table or table-valued function name
  std::optional<Identifier> alias;
  std::vector<Expr> function_args;
  std::unique_ptr<SelectStmt> subquery;
  std::unique_ptr<FromClause> group;  // parenthesized join group

  TableRef();
  TableRef(const TableRef& other);
  TableRef(TableRef&&) noexcept;
  TableRef& operator=(const TableRef& other);
  TableRef& operator=(TableRef&&) noexcept;
  ~TableRef();
};

enum class JoinKind { Comma, Inner, Left, Right, Full, Cross };

struct Join {
  JoinKind kind = JoinKind::Inner;
  bool natural = false;
  bool outer_keyword = false;  // LEFT OUTER vs LEFT
  bool inner_keyword = false;  // INNER JOIN vs JOIN
  TableRef table;
  std::optional<Expr> on;
  std::vector<Identifier> using_columns;
};

struct FromClause {
  TableRef first;
  std::vector<Join> joins;
};

enum class SortDirection { Unspecified, Asc, Desc };
enum class NullsOrder { Unspecified, First, Last };

struct OrderTerm {
  Expr expr;
  SortDirection direction = SortDirection::Unspecified;
  NullsOrder nulls = NullsOrder::Unspecified;
};

enum class SetOperator { Union, UnionAll, Intersect, Except };

struct SetOperation {
  SetOperator op = SetOperator::Union;
  std::unique_ptr<SelectStmt> arm;

  SetOperation();
  SetOperation(const SetOperation& other);
  SetOperation(SetOperation&&) noexcept;
  SetOperation& operator=(const SetOperation& other);
  SetOperation& operator=(SetOperation&&) noexcept;
  ~SetOperation();
};

struct CommonTableExpr {
  Identifier name;
  std::vector<Identifier> columns;
  std::unique_ptr<SelectStmt> select;

  CommonTableExpr();
  CommonTableExpr(const CommonTableExpr& other);
  CommonTableExpr(CommonTableExpr&&) noexcept;
  CommonTableExpr& operator=(const CommonTableExpr& other);
  CommonTableExpr& operator=(CommonTableExpr&&) noexcept;
  ~CommonTableExpr();
};

/// One SELECT node. A compound query stores its first arm in this node and
/// the remaining arms, in order, in `compound`; a trailing ORDER BY / LIMIT
/// of a compound query is attached to the first (root) node.
struct SelectStmt {
  bool recursive_with = false;
  std::vector<CommonTableExpr> with;
  bool distinct = false;
  bool all = false;
  std::vector<ResultColumn> projection;
  std::optional<FromClause> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  std::vector<OrderTerm> order_by;
  std::optional<Expr> limit;
  std::optional<Expr> offset;
  std::vector<SetOperation> compound;
};

struct QueryAst {
  SelectStmt root;
};

/// Where a nested SELECT hangs off its parent node.
enum class SubqueryPosition { With, Projection, From, JoinCondition, Where, GroupBy, Having, OrderBy, Limit, SetOperation };

struct ChildSelect {
  SubqueryPosition position;
  const SelectStmt* select;
};

/// Immediate child SELECT nodes of `select`, in source order.
std::vector<ChildSelect> child_selects(const SelectStmt& select);

bool operator==(const Identifier& a, const Identifier& b);
bool operator==(const Expr& a, const Expr& b);
bool operator==(const ResultColumn& a, const ResultColumn& b);
bool operator==(const TableRef& a, const TableRef& b);
bool operator==(const Join& a, const Join& b);
bool operator==(const FromClause& a, const FromClause& b);
bool operator==(const OrderTerm& a, const OrderTerm& b);
bool operator==(const SetOperation& a, const SetOperation& b);
bool operator==(const CommonTableExpr& a, const CommonTableExpr& b);
bool operator==(const SelectStmt& a, const SelectStmt& b);
bool operator==(const QueryAst& a, const QueryAst& b);

}  // namespace nl2sql::sql
