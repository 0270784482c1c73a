#include "nl2sql/sql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <string>
#include <vector>

#include "nl2sql/error.hpp"
#include "nl2sql/sql/lexer.hpp"

namespace nl2sql::sql {

namespace {

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

constexpr std::string_view kUnsupportedLeaders[] = {
    "INSERT", "UPDATE", "DELETE", "REPLACE", "CREATE", "DROP",     "ALTER",   "ATTACH", "DETACH",
    "PRAGMA", "VACUUM", "REINDEX", "ANALYZE", "BEGIN", "COMMIT",  "ROLLBACK", "END",   "SAVEPOINT",
    "RELEASE", "EXPLAIN"};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options)
      : text_(text), options_(options), tokens_(tokenize(text)) {}

  QueryAst parse_statement() {
    const Token& first = peek();
    if (first.kind == TokenKind::End) fail("empty statement");
    if (first.kind == TokenKind::Identifier) {
      const std::string word = to_upper(first.text);
      for (auto kw : kUnsupportedLeaders) {
        if (word == kw) throw UnsupportedStatement(word);
      }
    }
    if (!peek().is_keyword("SELECT") && !peek().is_keyword("WITH")) fail("expected SELECT");

    QueryAst ast;
    ast.root = parse_select_statement();
    if (options_.allow_trailing_semicolon) {
      while (peek().is_punct(";")) advance();
    }
    if (peek().kind != TokenKind::End) fail("unexpected token after end of statement");
    return ast;
  }

 private:
  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > parser.options_.max_depth) parser.fail("nesting too deep");
    }
    ~DepthGuard() { --parser.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;
    Parser& parser;
  };

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string shown = t.text;
    if (t.kind == TokenKind::String) shown = "'" + t.text + "'";
    throw SyntaxError(t.offset, shown, message);
  }

  bool accept_keyword(std::string_view kw) {
    if (peek().is_keyword(kw)) {
      advance();
      return true;
    }
    return false;
  }

  bool accept_punct(std::string_view p) {
    if (peek().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }

  bool at_select_start(std::size_t ahead = 0) const {
    return peek(ahead).is_keyword("SELECT") || peek(ahead).is_keyword("WITH");
  }

  bool is_name_token(const Token& t) const {
    return t.kind == TokenKind::QuotedIdentifier ||
           (t.kind == TokenKind::Identifier && !is_reserved_word(t.text));
  }

  Identifier parse_name(const char* what) {
    const Token& t = peek();
    if (!is_name_token(t)) fail(std::string("expected ") + what);
    advance();
    return Identifier{t.text, t.kind == TokenKind::QuotedIdentifier ? t.quote : char{0}};
  }

  // Alias after an expression or table: [AS] name. With AS a string literal
  // or any identifier is accepted; without AS only non-reserved names.
  std::optional<Identifier> parse_alias() {
    if (accept_keyword("AS")) {
      const Token& t = peek();
      if (t.kind == TokenKind::Identifier || t.kind == TokenKind::QuotedIdentifier) {
        advance();
        return Identifier{t.text, t.kind == TokenKind::QuotedIdentifier ? t.quote : char{0}};
      }
      if (t.kind == TokenKind::String) {
        advance();
        return Identifier{t.text, '\''};
      }
      fail("expected alias after AS");
    }
    if (is_name_token(peek())) return parse_name("alias");
    return std::nullopt;
  }

  // ---- statements -------------------------------------------------------

  SelectStmt parse_select_statement() {
    DepthGuard guard(*this);
    SelectStmt head;
    std::vector<CommonTableExpr> with;
    bool recursive = false;
    if (accept_keyword("WITH")) {
      recursive = accept_keyword("RECURSIVE");
      do {
        CommonTableExpr cte;
        cte.name = parse_name("common table name");
        if (accept_punct("(")) {
          do {
            cte.columns.push_back(parse_name("column name"));
          } while (accept_punct(","));
          expect_punct(")");
        }
        expect_keyword("AS");
        if (accept_keyword("NOT")) {
          expect_keyword("MATERIALIZED");
        } else {
          accept_keyword("MATERIALIZED");
        }
        expect_punct("(");
        cte.select = std::make_unique<SelectStmt>(parse_select_statement());
        expect_punct(")");
        with.push_back(std::move(cte));
      } while (accept_punct(","));
    }

    head = parse_select_core();
    head.with = std::move(with);
    head.recursive_with = recursive;

    while (true) {
      SetOperator op;
      if (accept_keyword("UNION")) {
        op = accept_keyword("ALL") ? SetOperator::UnionAll : SetOperator::Union;
      } else if (accept_keyword("INTERSECT")) {
        op = SetOperator::Intersect;
      } else if (accept_keyword("EXCEPT")) {
        op = SetOperator::Except;
      } else {
        break;
      }
      SetOperation setop;
      setop.op = op;
      setop.arm = std::make_unique<SelectStmt>(parse_select_core());
      head.compound.push_back(std::move(setop));
    }

    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderTerm term;
        term.expr = parse_expr();
        if (accept_keyword("ASC")) {
          term.direction = SortDirection::Asc;
        } else if (accept_keyword("DESC")) {
          term.direction = SortDirection::Desc;
        }
        if (accept_keyword("NULLS")) {
          if (accept_keyword("FIRST")) {
            term.nulls = NullsOrder::First;
          } else {
            expect_keyword("LAST");
            term.nulls = NullsOrder::Last;
          }
        }
        head.order_by.push_back(std::move(term));
      } while (accept_punct(","));
    }

    if (accept_keyword("LIMIT")) {
      Expr first = parse_expr();
      if (accept_keyword("OFFSET")) {
        head.limit = std::move(first);
        head.offset = parse_expr();
      } else if (accept_punct(",")) {
        // LIMIT <offset>, <count>
        head.offset = std::move(first);
        head.limit = parse_expr();
      } else {
        head.limit = std::move(first);
      }
    }
    return head;
  }

  SelectStmt parse_select_core() {
    SelectStmt s;
    expect_keyword("SELECT");
    if (accept_keyword("DISTINCT")) {
      s.distinct = true;
    } else if (accept_keyword("ALL")) {
      s.all = true;
    }

    do {
      ResultColumn rc;
      if (peek().is_punct("*")) {
        advance();
        rc.expr = Expr(ExprKind::Star);
      } else if (is_name_token(peek()) && peek(1).is_punct(".") && peek(2).is_punct("*")) {
        rc.expr = Expr(ExprKind::Star);
        rc.expr.qualifier = parse_name("table name");
        advance();
        advance();
      } else {
        rc.expr = parse_expr();
        rc.alias = parse_alias();
      }
      s.projection.push_back(std::move(rc));
    } while (accept_punct(","));

    if (accept_keyword("FROM")) s.from = parse_from();
    if (accept_keyword("WHERE")) s.where = parse_expr();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        s.group_by.push_back(parse_expr());
      } while (accept_punct(","));
    }
    if (accept_keyword("HAVING")) s.having = parse_expr();
    if (peek().is_keyword("WINDOW")) fail("WINDOW clauses are not supported");
    return s;
  }

  // ---- FROM -------------------------------------------------------------

  FromClause parse_from() {
    FromClause from;
    from.first = parse_table_or_subquery();
    while (true) {
      Join join;
      if (accept_punct(",")) {
        join.kind = JoinKind::Comma;
        join.table = parse_table_or_subquery();
        from.joins.push_back(std::move(join));
        continue;
      }
      const std::size_t mark = pos_;
      join.natural = accept_keyword("NATURAL");
      if (accept_keyword("LEFT")) {
        join.kind = JoinKind::Left;
        join.outer_keyword = accept_keyword("OUTER");
      } else if (accept_keyword("RIGHT")) {
        join.kind = JoinKind::Right;
        join.outer_keyword = accept_keyword("OUTER");
      } else if (accept_keyword("FULL")) {
        join.kind = JoinKind::Full;
        join.outer_keyword = accept_keyword("OUTER");
      } else if (accept_keyword("INNER")) {
        join.kind = JoinKind::Inner;
        join.inner_keyword = true;
      } else if (accept_keyword("CROSS")) {
        join.kind = JoinKind::Cross;
      }
      if (!accept_keyword("JOIN")) {
        if (pos_ != mark) fail("expected JOIN");
        break;
      }
      join.table = parse_table_or_subquery();
      if (accept_keyword("ON")) {
        join.on = parse_expr();
      } else if (accept_keyword("USING")) {
        expect_punct("(");
        do {
          join.using_columns.push_back(parse_name("column name"));
        } while (accept_punct(","));
        expect_punct(")");
      }
      from.joins.push_back(std::move(join));
    }
    return from;
  }

  TableRef parse_table_or_subquery() {
    DepthGuard guard(*this);
    TableRef ref;
    if (accept_punct("(")) {
      if (at_select_start()) {
        ref.kind = TableRefKind::Subquery;
        ref.subquery = std::make_unique<SelectStmt>(parse_select_statement());
        expect_punct(")");
        ref.alias = parse_alias();
      } else {
        ref.kind = TableRefKind::Group;
        ref.group = std::make_unique<FromClause>(parse_from());
        expect_punct(")");
      }
      return ref;
    }

    ref.kind = TableRefKind::Table;
    ref.name = parse_name("table name");
    if (accept_punct(".")) {
      ref.schema = std::move(ref.name);
      ref.name = parse_name("table name");
    }
    if (accept_punct("(")) {
      ref.kind = TableRefKind::Function;
      if (!peek().is_punct(")")) {
        do {
          ref.function_args.push_back(parse_expr());
        } while (accept_punct(","));
      }
      expect_punct(")");
    }
    ref.alias = parse_alias();
    if (accept_keyword("INDEXED")) {
      expect_keyword("BY");
      parse_name("index name");
    } else if (peek().is_keyword("NOT") && peek(1).is_keyword("INDEXED")) {
      advance();
      advance();
    }
    return ref;
  }

  // ---- expressions ------------------------------------------------------

  Expr parse_expr() {
    DepthGuard guard(*this);
    return parse_or();
  }

  static Expr binary(std::string op, Expr lhs, Expr rhs) {
    Expr e(ExprKind::Binary);
    e.text = std::move(op);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (accept_keyword("OR")) lhs = binary("OR", std::move(lhs), parse_and());
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (accept_keyword("AND")) lhs = binary("AND", std::move(lhs), parse_not());
    return lhs;
  }

  Expr parse_not() {
    if (peek().is_keyword("NOT")) {
      DepthGuard guard(*this);
      advance();
      Expr e(ExprKind::Unary);
      e.text = "NOT";
      e.args.push_back(parse_not());
      return e;
    }
    return parse_equality();
  }

  Expr parse_equality() {
    Expr lhs = parse_comparison();
    while (true) {
      if (peek().is_punct("=") || peek().is_punct("==")) {
        advance();
        lhs = binary("=", std::move(lhs), parse_comparison());
      } else if (peek().is_punct("!=") || peek().is_punct("<>")) {
        advance();
        lhs = binary("!=", std::move(lhs), parse_comparison());
      } else if (peek().is_keyword("IS")) {
        advance();
        std::string op = accept_keyword("NOT") ? "IS NOT" : "IS";
        if (accept_keyword("DISTINCT")) {
          expect_keyword("FROM");
          op = op == "IS" ? "IS DISTINCT FROM" : "IS NOT DISTINCT FROM";
        }
        lhs = binary(std::move(op), std::move(lhs), parse_comparison());
      } else if (peek().is_keyword("ISNULL") || peek().is_keyword("NOTNULL")) {
        Expr e(ExprKind::Postfix);
        e.text = to_upper(advance().text);
        e.args.push_back(std::move(lhs));
        lhs = std::move(e);
      } else if (peek().is_keyword("NOT") && peek(1).is_keyword("NULL")) {
        advance();
        advance();
        Expr e(ExprKind::Postfix);
        e.text = "NOTNULL";
        e.args.push_back(std::move(lhs));
        lhs = std::move(e);
      } else if (starts_negatable_operator(0) ||
                 (peek().is_keyword("NOT") && starts_negatable_operator(1))) {
        const bool negated = accept_keyword("NOT");
        lhs = parse_negatable(std::move(lhs), negated);
      } else {
        break;
      }
    }
    return lhs;
  }

  bool starts_negatable_operator(std::size_t ahead) const {
    const Token& t = peek(ahead);
    return t.is_keyword("IN") || t.is_keyword("LIKE") || t.is_keyword("GLOB") || t.is_keyword("REGEXP") ||
           t.is_keyword("MATCH") || t.is_keyword("BETWEEN");
  }

  Expr parse_negatable(Expr lhs, bool negated) {
    if (accept_keyword("IN")) {
      expect_punct("(");
      if (at_select_start()) {
        Expr e(ExprKind::InSubquery);
        e.negated = negated;
        e.args.push_back(std::move(lhs));
        e.subquery = std::make_unique<SelectStmt>(parse_select_statement());
        expect_punct(")");
        return e;
      }
      Expr e(ExprKind::InList);
      e.negated = negated;
      e.args.push_back(std::move(lhs));
      if (!peek().is_punct(")")) {
        do {
          e.args.push_back(parse_expr());
        } while (accept_punct(","));
      }
      expect_punct(")");
      return e;
    }
    if (accept_keyword("BETWEEN")) {
      Expr e(ExprKind::Between);
      e.negated = negated;
      e.args.push_back(std::move(lhs));
      e.args.push_back(parse_comparison());
      expect_keyword("AND");
      e.args.push_back(parse_comparison());
      return e;
    }
    Expr e(ExprKind::Like);
    e.negated = negated;
    e.text = to_upper(advance().text);
    e.args.push_back(std::move(lhs));
    e.args.push_back(parse_comparison());
    if (accept_keyword("ESCAPE")) e.args.push_back(parse_comparison());
    return e;
  }

  Expr parse_comparison() {
    Expr lhs = parse_bitwise();
    while (peek().is_punct("<") || peek().is_punct("<=") || peek().is_punct(">") || peek().is_punct(">=")) {
      std::string op = advance().text;
      lhs = binary(std::move(op), std::move(lhs), parse_bitwise());
    }
    return lhs;
  }

  Expr parse_bitwise() {
    Expr lhs = parse_additive();
    while (peek().is_punct("&") || peek().is_punct("|") || peek().is_punct("<<") || peek().is_punct(">>")) {
      std::string op = advance().text;
      lhs = binary(std::move(op), std::move(lhs), parse_additive());
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (peek().is_punct("+") || peek().is_punct("-")) {
      std::string op = advance().text;
      lhs = binary(std::move(op), std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_concat();
    while (peek().is_punct("*") || peek().is_punct("/") || peek().is_punct("%")) {
      std::string op = advance().text;
      lhs = binary(std::move(op), std::move(lhs), parse_concat());
    }
    return lhs;
  }

  Expr parse_concat() {
    Expr lhs = parse_unary();
    while (peek().is_punct("||") || peek().is_punct("->") || peek().is_punct("->>")) {
      std::string op = advance().text;
      lhs = binary(std::move(op), std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    DepthGuard guard(*this);
    if (peek().is_punct("-") || peek().is_punct("+") || peek().is_punct("~")) {
      Expr e(ExprKind::Unary);
      e.text = advance().text;
      e.args.push_back(parse_unary());
      return e;
    }
    Expr e = parse_primary();
    while (accept_keyword("COLLATE")) {
      Expr c(ExprKind::Collate);
      c.text = parse_name("collation name").name;
      c.args.push_back(std::move(e));
      e = std::move(c);
    }
    return e;
  }

  std::string parse_type_name() {
    std::string type;
    while (peek().kind == TokenKind::Identifier && !peek().is_punct(")")) {
      if (!type.empty()) type += ' ';
      type += advance().text;
    }
    if (type.empty()) fail("expected type name");
    if (accept_punct("(")) {
      type += '(';
      auto signed_number = [&] {
        std::string out;
        if (peek().is_punct("-") || peek().is_punct("+")) out += advance().text;
        if (peek().kind != TokenKind::Number) fail("expected number in type");
        out += advance().text;
        return out;
      };
      type += signed_number();
      if (accept_punct(",")) type += "," + signed_number();
      expect_punct(")");
      type += ')';
    }
    return type;
  }

  // Captures `OVER (...)`, `OVER name` and `FILTER (WHERE ...)` verbatim.
  std::string parse_window_suffix() {
    if (!peek().is_keyword("OVER") && !peek().is_keyword("FILTER")) return {};
    const std::size_t start = peek().offset;
    std::size_t end = start;
    while (peek().is_keyword("OVER") || peek().is_keyword("FILTER")) {
      advance();
      if (peek().is_punct("(")) {
        int depth = 0;
        do {
          if (peek().kind == TokenKind::End) fail("unterminated window clause");
          if (peek().is_punct("(")) ++depth;
          if (peek().is_punct(")")) --depth;
          end = peek().offset + 1;
          advance();
        } while (depth > 0);
      } else {
        const Token& t = peek();
        parse_name("window name");
        end = t.offset + t.text.size() + (t.kind == TokenKind::QuotedIdentifier ? 2 : 0);
      }
    }
    return std::string(text_.substr(start, end - start));
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: {
        Expr e(ExprKind::Literal);
        e.literal = LiteralKind::Number;
        e.text = advance().text;
        return e;
      }
      case TokenKind::String: {
        Expr e(ExprKind::Literal);
        e.literal = LiteralKind::String;
        e.text = advance().text;
        return e;
      }
      case TokenKind::Parameter: {
        Expr e(ExprKind::Opaque);
        e.text = advance().text;
        return e;
      }
      case TokenKind::Punct: {
        if (!t.is_punct("(")) fail("unexpected token in expression");
        advance();
        if (at_select_start()) {
          Expr e(ExprKind::ScalarSubquery);
          e.subquery = std::make_unique<SelectStmt>(parse_select_statement());
          expect_punct(")");
          return e;
        }
        Expr inner = parse_expr();
        if (accept_punct(",")) {
          Expr tuple(ExprKind::Tuple);
          tuple.args.push_back(std::move(inner));
          do {
            tuple.args.push_back(parse_expr());
          } while (accept_punct(","));
          expect_punct(")");
          return tuple;
        }
        expect_punct(")");
        return inner;
      }
      case TokenKind::End:
        fail("unexpected end of input in expression");
      case TokenKind::Identifier:
      case TokenKind::QuotedIdentifier:
        break;
    }

    if (t.kind == TokenKind::Identifier) {
      if (t.is_keyword("NULL")) {
        advance();
        Expr e(ExprKind::Literal);
        e.literal = LiteralKind::Null;
        e.text = "NULL";
        return e;
      }
      for (auto kw : {"TRUE", "FALSE", "CURRENT_DATE", "CURRENT_TIME", "CURRENT_TIMESTAMP"}) {
        if (t.is_keyword(kw)) {
          advance();
          Expr e(ExprKind::Literal);
          e.literal = LiteralKind::Keyword;
          e.text = kw;
          return e;
        }
      }
      if (t.is_keyword("CASE")) return parse_case();
      if (t.is_keyword("CAST")) {
        advance();
        expect_punct("(");
        Expr e(ExprKind::Cast);
        e.args.push_back(parse_expr());
        expect_keyword("AS");
        e.text = parse_type_name();
        expect_punct(")");
        return e;
      }
      if (t.is_keyword("EXISTS")) {
        advance();
        expect_punct("(");
        Expr e(ExprKind::Exists);
        e.subquery = std::make_unique<SelectStmt>(parse_select_statement());
        expect_punct(")");
        return e;
      }
    }

    // Function call: any identifier (reserved words like REPLACE included)
    // directly followed by '('.
    if ((t.kind == TokenKind::Identifier || t.kind == TokenKind::QuotedIdentifier) && peek(1).is_punct("(") &&
        !t.is_keyword("IN")) {
      Expr e(ExprKind::Function);
      e.text = advance().text;
      advance();  // (
      if (accept_punct("*")) {
        e.args.push_back(Expr(ExprKind::Star));
      } else if (!peek().is_punct(")")) {
        e.distinct = accept_keyword("DISTINCT");
        do {
          e.args.push_back(parse_expr());
        } while (accept_punct(","));
      }
      expect_punct(")");
      e.window = parse_window_suffix();
      return e;
    }

    if (!is_name_token(t)) fail("unexpected keyword in expression");
    Expr e(ExprKind::Column);
    Identifier first = parse_name("column name");
    if (peek().is_punct(".")) {
      advance();
      if (accept_punct("*")) {
        Expr star(ExprKind::Star);
        star.qualifier = std::move(first);
        return star;
      }
      e.qualifier = std::move(first);
      e.name = parse_name("column name");
      if (peek().is_punct(".")) fail("three-part column names are not supported");
    } else {
      e.name = std::move(first);
    }
    return e;
  }

  Expr parse_case() {
    expect_keyword("CASE");
    Expr e(ExprKind::Case);
    if (!peek().is_keyword("WHEN")) {
      e.has_operand = true;
      e.args.push_back(parse_expr());
    }
    if (!peek().is_keyword("WHEN")) fail("expected WHEN");
    while (accept_keyword("WHEN")) {
      e.args.push_back(parse_expr());
      expect_keyword("THEN");
      e.args.push_back(parse_expr());
    }
    if (accept_keyword("ELSE")) {
      e.has_else = true;
      e.args.push_back(parse_expr());
    }
    expect_keyword("END");
    return e;
  }

  std::string_view text_;
  ParseOptions options_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace

QueryAst parse_sql(std::string_view text, const ParseOptions& options) {
  Parser parser(text, options);
  return parser.parse_statement();
}

}  // namespace nl2sql::sql
