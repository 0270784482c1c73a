#include "nl2sql/sql/printer.hpp"

#include <string_view>

namespace nl2sql::sql {

namespace {

std::string quote_with(std::string_view value, char open) {
  const char close = open == '[' ? ']' : open;
  std::string out(1, open);
  for (char c : value) {
    out.push_back(c);
    if (c == close && open != '[') out.push_back(c);
  }
  out.push_back(close);
  return out;
}

std::string ident(const Identifier& id) { return id.quote ? quote_with(id.name, id.quote) : id.name; }

bool needs_parens(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Unary:
    case ExprKind::Binary:
    case ExprKind::Like:
    case ExprKind::Between:
    case ExprKind::InList:
    case ExprKind::InSubquery:
    case ExprKind::Postfix:
    case ExprKind::Collate:
      return true;
    default:
      return false;
  }
}

class Printer {
 public:
  std::string out;

  void expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        if (e.literal == LiteralKind::String) {
          out += quote_with(e.text, '\'');
        } else {
          out += e.text;
        }
        break;
      case ExprKind::Column:
        if (e.qualifier) out += ident(*e.qualifier) + ".";
        out += ident(e.name);
        break;
      case ExprKind::Star:
        if (e.qualifier) out += ident(*e.qualifier) + ".";
        out += "*";
        break;
      case ExprKind::Unary:
        out += e.text;
        if (e.text == "NOT") out += " ";
        operand(e.args[0]);
        break;
      case ExprKind::Binary:
        operand(e.args[0]);
        out += " " + e.text + " ";
        operand(e.args[1]);
        break;
      case ExprKind::Like:
        operand(e.args[0]);
        out += e.negated ? " NOT " : " ";
        out += e.text + " ";
        operand(e.args[1]);
        if (e.args.size() > 2) {
          out += " ESCAPE ";
          operand(e.args[2]);
        }
        break;
      case ExprKind::Between:
        operand(e.args[0]);
        out += e.negated ? " NOT BETWEEN " : " BETWEEN ";
        operand(e.args[1]);
        out += " AND ";
        operand(e.args[2]);
        break;
      case ExprKind::InList:
        operand(e.args[0]);
        out += e.negated ? " NOT IN (" : " IN (";
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          if (i > 1) out += ", ";
          expr(e.args[i]);
        }
        out += ")";
        break;
      case ExprKind::InSubquery:
        operand(e.args[0]);
        out += e.negated ? " NOT IN (" : " IN (";
        select(*e.subquery);
        out += ")";
        break;
      case ExprKind::Exists:
        out += "EXISTS (";
        select(*e.subquery);
        out += ")";
        break;
      case ExprKind::ScalarSubquery:
        out += "(";
        select(*e.subquery);
        out += ")";
        break;
      case ExprKind::Function:
        out += e.text + "(";
        if (e.distinct) out += "DISTINCT ";
        list(e.args);
        out += ")";
        if (!e.window.empty()) out += " " + e.window;
        break;
      case ExprKind::Case: {
        out += "CASE";
        std::size_t i = 0;
        if (e.has_operand) {
          out += " ";
          expr(e.args[i++]);
        }
        const std::size_t pairs_end = e.args.size() - (e.has_else ? 1 : 0);
        for (; i + 1 < pairs_end; i += 2) {
          out += " WHEN ";
          expr(e.args[i]);
          out += " THEN ";
          expr(e.args[i + 1]);
        }
        if (e.has_else) {
          out += " ELSE ";
          expr(e.args.back());
        }
        out += " END";
        break;
      }
      case ExprKind::Cast:
        out += "CAST(";
        expr(e.args[0]);
        out += " AS " + e.text + ")";
        break;
      case ExprKind::Collate:
        operand(e.args[0]);
        out += " COLLATE " + e.text;
        break;
      case ExprKind::Postfix:
        operand(e.args[0]);
        out += " " + e.text;
        break;
      case ExprKind::Tuple:
        out += "(";
        list(e.args);
        out += ")";
        break;
      case ExprKind::Opaque:
        out += e.text;
        break;
    }
  }

  void operand(const Expr& e) {
    if (needs_parens(e)) {
      out += "(";
      expr(e);
      out += ")";
    } else {
      expr(e);
    }
  }

  void list(const std::vector<Expr>& es) {
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (i) out += ", ";
      expr(es[i]);
    }
  }

  void table(const TableRef& t) {
    switch (t.kind) {
      case TableRefKind::Table:
      case TableRefKind::Function:
        if (t.schema) out += ident(*t.schema) + ".";
        out += ident(t.name);
        if (t.kind == TableRefKind::Function) {
          out += "(";
          list(t.function_args);
          out += ")";
        }
        break;
      case TableRefKind::Subquery:
        out += "(";
        select(*t.subquery);
        out += ")";
        break;
      case TableRefKind::Group:
        out += "(";
        from(*t.group);
        out += ")";
        break;
    }
    if (t.alias) out += " AS " + ident(*t.alias);
  }

  void from(const FromClause& f) {
    table(f.first);
    for (const auto& j : f.joins) {
      if (j.kind == JoinKind::Comma) {
        out += ", ";
        table(j.table);
        continue;
      }
      out += " ";
      if (j.natural) out += "NATURAL ";
      switch (j.kind) {
        case JoinKind::Left:
          out += j.outer_keyword ? "LEFT OUTER " : "LEFT ";
          break;
        case JoinKind::Right:
          out += j.outer_keyword ? "RIGHT OUTER " : "RIGHT ";
          break;
        case JoinKind::Full:
          out += j.outer_keyword ? "FULL OUTER " : "FULL ";
          break;
        case JoinKind::Cross:
          out += "CROSS ";
          break;
        case JoinKind::Inner:
          if (j.inner_keyword) out += "INNER ";
          break;
        case JoinKind::Comma:
          break;
      }
      out += "JOIN ";
      table(j.table);
      if (j.on) {
        out += " ON ";
        expr(*j.on);
      } else if (!j.using_columns.empty()) {
        out += " USING (";
        for (std::size_t i = 0; i < j.using_columns.size(); ++i) {
          if (i) out += ", ";
          out += ident(j.using_columns[i]);
        }
        out += ")";
      }
    }
  }

  void core(const SelectStmt& s) {
    out += "SELECT ";
    if (s.distinct) out += "DISTINCT ";
    if (s.all) out += "ALL ";
    for (std::size_t i = 0; i < s.projection.size(); ++i) {
      if (i) out += ", ";
      expr(s.projection[i].expr);
      if (s.projection[i].alias) out += " AS " + ident(*s.projection[i].alias);
    }
    if (s.from) {
      out += " FROM ";
      from(*s.from);
    }
    if (s.where) {
      out += " WHERE ";
      expr(*s.where);
    }
    if (!s.group_by.empty()) {
      out += " GROUP BY ";
      list(s.group_by);
    }
    if (s.having) {
      out += " HAVING ";
      expr(*s.having);
    }
  }

  void select(const SelectStmt& s) {
    if (!s.with.empty()) {
      out += s.recursive_with ? "WITH RECURSIVE " : "WITH ";
      for (std::size_t i = 0; i < s.with.size(); ++i) {
        const auto& cte = s.with[i];
        if (i) out += ", ";
        out += ident(cte.name);
        if (!cte.columns.empty()) {
          out += "(";
          for (std::size_t c = 0; c < cte.columns.size(); ++c) {
            if (c) out += ", ";
            out += ident(cte.columns[c]);
          }
          out += ")";
        }
        out += " AS (";
        select(*cte.select);
        out += ")";
      }
      out += " ";
    }
    core(s);
    for (const auto& op : s.compound) {
      switch (op.op) {
        case SetOperator::Union:
          out += " UNION ";
          break;
        case SetOperator::UnionAll:
          out += " UNION ALL ";
          break;
        case SetOperator::Intersect:
          out += " INTERSECT ";
          break;
        case SetOperator::Except:
          out += " EXCEPT ";
          break;
      }
      core(*op.arm);
    }
    if (!s.order_by.empty()) {
      out += " ORDER BY ";
      for (std::size_t i = 0; i < s.order_by.size(); ++i) {
        const auto& term = s.order_by[i];
        if (i) out += ", ";
        expr(term.expr);
        if (term.direction == SortDirection::Asc) out += " ASC";
        if (term.direction == SortDirection::Desc) out += " DESC";
        if (term.nulls == NullsOrder::First) out += " NULLS FIRST";
        if (term.nulls == NullsOrder::Last) out += " NULLS LAST";
      }
    }
    if (s.limit) {
      out += " LIMIT ";
      expr(*s.limit);
      if (s.offset) {
        out += " OFFSET ";
        expr(*s.offset);
      }
    }
  }
};

}  // namespace

std::string to_sql(const QueryAst& ast) { return to_sql(ast.root); }

std::string to_sql(const SelectStmt& select) {
  Printer p;
  p.select(select);
  return std::move(p.out);
}

std::string to_sql(const Expr& e) {
  Printer p;
  p.expr(e);
  return std::move(p.out);
}

}  // namespace nl2sql::sql
