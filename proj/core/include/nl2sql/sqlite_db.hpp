#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "nl2sql/result_table.hpp"

struct sqlite3;

namespace nl2sql::db {

enum class QueryStatus { Ok, ExecError, Timeout, WriteAttempt };

struct QueryResult {
  QueryStatus status = QueryStatus::Ok;
  ResultTable table;
  std::string message;  // engine message for ExecError, reason for WriteAttempt
};

/// Owning handle to one SQLite connection.
class Connection {
 public:
  /// Opens an existing database file read-only with query_only enforced.
  /// Throws DatabaseUnreadable if the file is missing or not a database.
  static Connection open_read_only(const std::filesystem::path& path);

  /// Opens (creating if needed) a writable database. Used to build fixtures.
  static Connection open_writable(const std::filesystem::path& path);

  Connection(Connection&&) noexcept;
  Connection& operator=(Connection&&) noexcept;
  ~Connection();

  /// Runs a script of statements; throws Error("ExecError") on failure.
  void execute_script(std::string_view sql);

  /// Runs exactly one read-only SELECT and materializes every row. Anything
  /// else (DML, DDL, PRAGMA, several statements) is refused as WriteAttempt
  /// without being executed.
  QueryResult run_select(std::string_view sql, std::chrono::milliseconds timeout) const;

  const std::filesystem::path& path() const noexcept { return path_; }
  sqlite3* handle() const noexcept { return db_.get(); }

 private:
  struct Closer {
    void operator()(sqlite3* db) const noexcept;
  };

  Connection(std::unique_ptr<sqlite3, Closer> db, std::filesystem::path path);

  std::unique_ptr<sqlite3, Closer> db_;
  std::filesystem::path path_;
};

/// Convenience: builds a database file from a SQL script, replacing any
/// existing file at `path`.
void build_database(const std::filesystem::path& path, std::string_view script);

/// Double-quotes an identifier for interpolation into SQL.
std::string quote_identifier(std::string_view name);

}  // namespace nl2sql::db
