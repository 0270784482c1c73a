#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nl2sql::sql {

enum class TokenKind {
  Identifier,        // bare word, keywords included
  QuotedIdentifier,  // "x", `x` or [x]; `quote` records which
  String,            // 'x' with '' unescaped
  Number,
  Parameter,         // ?, ?1, :name, @name, $name
  Punct,             // operators and punctuation, longest match
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;      // unescaped value for strings / quoted identifiers
  std::size_t offset = 0;
  char quote = 0;

  /// Case-insensitive keyword test for bare identifiers.
  bool is_keyword(std::string_view upper) const;
  bool is_punct(std::string_view p) const { return kind == TokenKind::Punct && text == p; }
};

/// Splits SQL text into tokens; comments and whitespace are dropped. The
/// returned vector always ends with a TokenKind::End token. Throws
/// SyntaxError on unterminated literals or stray characters.
std::vector<Token> tokenize(std::string_view sql);

/// True for words that cannot serve as bare aliases or column names.
bool is_reserved_word(std::string_view word);

}  // namespace nl2sql::sql
