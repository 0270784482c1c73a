#pragma once

#include <cstddef>
#include <string>

namespace nl2sql {

/// One (question, gold SQL, database) triple from a source corpus.
struct NlSqlExample {
  std::string question;
  std::string gold_sql;
  std::string db_id;
  std::size_t source_index = 0;
  /// Label of the source file (e.g. "train", "dev"); part of the item identity
  /// because source indices restart in every file.
  std::string split;

  friend bool operator==(const NlSqlExample&, const NlSqlExample&) = default;
};

}  // namespace nl2sql
