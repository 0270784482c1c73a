#include "nl2sql/sql/lexer.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>

#include "nl2sql/error.hpp"

namespace nl2sql::sql {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '$';
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

constexpr std::string_view kThreeOrTwoCharPuncts[] = {
    "->>", "->", "<>", "!=", "<=", ">=", "==", "||", "<<", ">>"};

constexpr std::string_view kReserved[] = {
    "ALL",       "AND",     "AS",       "ASC",       "BETWEEN", "BY",        "CASE",    "CAST",     "COLLATE",
    "CREATE",    "CROSS",   "DELETE",   "DESC",      "DISTINCT", "DROP",     "ELSE",    "END",      "ESCAPE",
    "EXCEPT",    "EXISTS",  "FROM",     "FULL",      "GLOB",    "GROUP",     "HAVING",  "IN",       "INDEX",
    "INNER",     "INSERT",  "INTERSECT", "INTO",     "IS",      "ISNULL",    "JOIN",    "LEFT",     "LIKE",
    "LIMIT",     "MATCH",   "NATURAL",  "NOT",       "NOTNULL", "NULL",      "OFFSET",  "ON",       "OR",
    "ORDER",     "OUTER",   "REGEXP",   "RIGHT",     "SELECT",  "SET",       "TABLE",   "THEN",     "UNION",
    "UPDATE",    "USING",   "VALUES",   "WHEN",      "WHERE",   "WINDOW",    "WITH",    "ALTER",    "ATTACH",
    "DETACH",    "PRAGMA",  "REPLACE",  "VACUUM",    "REINDEX", "ANALYZE",   "BEGIN",   "COMMIT",   "ROLLBACK",
    "RETURNING", "DEFAULT", "CHECK",    "CONSTRAINT", "REFERENCES", "PRIMARY", "UNIQUE", "FOREIGN"};

}  // namespace

bool Token::is_keyword(std::string_view kw) const {
  if (kind != TokenKind::Identifier || text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) != kw[i]) return false;
  }
  return true;
}

bool is_reserved_word(std::string_view word) {
  const std::string u = upper(word);
  return std::find(std::begin(kReserved), std::end(kReserved), u) != std::end(kReserved);
}

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sql.size();

  auto read_quoted = [&](char open, char close, std::size_t start) {
    std::string value;
    std::size_t j = start + 1;
    while (true) {
      if (j >= n) {
        throw SyntaxError(start, std::string(sql.substr(start, std::min<std::size_t>(n - start, 20))),
                          "unterminated quoted token");
      }
      if (sql[j] == close) {
        // Doubled closing quote is an escaped quote (not for brackets).
        if (open != '[' && j + 1 < n && sql[j + 1] == close) {
          value.push_back(close);
          j += 2;
          continue;
        }
        break;
      }
      value.push_back(sql[j]);
      ++j;
    }
    i = j + 1;
    return value;
  };

  while (i < n) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      const auto end = sql.find("*/", i + 2);
      i = end == std::string_view::npos ? n : end + 2;
      continue;
    }

    Token tok;
    tok.offset = i;
    if (c == '\'') {
      tok.kind = TokenKind::String;
      tok.quote = '\'';
      tok.text = read_quoted('\'', '\'', i);
    } else if (c == '"' || c == '`') {
      tok.kind = TokenKind::QuotedIdentifier;
      tok.quote = c;
      tok.text = read_quoted(c, c, i);
    } else if (c == '[') {
      tok.kind = TokenKind::QuotedIdentifier;
      tok.quote = '[';
      tok.text = read_quoted('[', ']', i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      std::size_t j = i;
      if (c == '0' && j + 1 < n && (sql[j + 1] == 'x' || sql[j + 1] == 'X')) {
        j += 2;
        while (j < n && std::isxdigit(static_cast<unsigned char>(sql[j]))) ++j;
      } else {
        while (j < n && (std::isdigit(static_cast<unsigned char>(sql[j])) || sql[j] == '_')) ++j;
        if (j < n && sql[j] == '.') {
          ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
        }
        if (j < n && (sql[j] == 'e' || sql[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < n && (sql[k] == '+' || sql[k] == '-')) ++k;
          if (k < n && std::isdigit(static_cast<unsigned char>(sql[k]))) {
            j = k;
            while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
          }
        }
      }
      tok.kind = TokenKind::Number;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < n && is_ident_char(sql[j])) ++j;
      tok.kind = TokenKind::Identifier;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (c == '?' || c == ':' || c == '@' || c == '$') {
      std::size_t j = i + 1;
      while (j < n && is_ident_char(sql[j])) ++j;
      if (c != '?' && j == i + 1) {
        throw SyntaxError(i, std::string(1, c), "unexpected character");
      }
      tok.kind = TokenKind::Parameter;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else {
      tok.kind = TokenKind::Punct;
      bool matched = false;
      for (auto p : kThreeOrTwoCharPuncts) {
        if (sql.substr(i, p.size()) == p) {
          tok.text = std::string(p);
          i += p.size();
          matched = true;
          break;
        }
      }
      if (!matched) {
        static constexpr std::string_view kSingle = "()*,.;=<>+-/%&|~";
        if (kSingle.find(c) == std::string_view::npos) {
          throw SyntaxError(i, std::string(1, c), "unexpected character");
        }
        tok.text = std::string(1, c);
        ++i;
      }
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::End;
  end.offset = n;
  tokens.push_back(std::move(end));
  return tokens;
}

}  // namespace nl2sql::sql
