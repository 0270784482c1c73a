#include "nl2sql/sqlite_db.hpp"

#include <sqlite3.h>

#include <cctype>
#include <cstdio>
#include <filesystem>

#include "nl2sql/error.hpp"

namespace nl2sql {

std::string value_to_text(const Value& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NULL"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.15g", v);
      return buf;
    }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const Blob& v) const { return "<blob " + std::to_string(v.bytes.size()) + " bytes>"; }
  };
  return std::visit(Visitor{}, value);
}

namespace db {

namespace {

struct StatementDeleter {
  void operator()(sqlite3_stmt* s) const noexcept { sqlite3_finalize(s); }
};
using Statement = std::unique_ptr<sqlite3_stmt, StatementDeleter>;

std::string uri_for(const std::filesystem::path& path, std::string_view params) {
  std::string out = "file:";
  for (unsigned char c : path.string()) {
    if (c == '?' || c == '#' || c == '%' || c < 0x20) {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  out += "?";
  out += params;
  return out;
}

// Skips whitespace, comments and statement separators.
std::string_view skip_trivia(std::string_view s, bool skip_semicolons) {
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || (skip_semicolons && c == ';')) {
      ++i;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      const auto end = s.find("*/", i + 2);
      i = end == std::string_view::npos ? s.size() : end + 2;
    } else {
      break;
    }
  }
  return s.substr(i);
}

std::string leading_keyword(std::string_view sql) {
  std::string_view rest = skip_trivia(sql, false);
  while (!rest.empty() && rest.front() == '(') rest = skip_trivia(rest.substr(1), false);
  std::string word;
  for (char c : rest) {
    if (!std::isalpha(static_cast<unsigned char>(c))) break;
    word.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return word;
}

struct Deadline {
  std::chrono::steady_clock::time_point at;
};

int progress_callback(void* arg) {
  const auto* d = static_cast<const Deadline*>(arg);
  return std::chrono::steady_clock::now() >= d->at ? 1 : 0;
}

Value read_value(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_INTEGER:
      return static_cast<std::int64_t>(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT:
      return sqlite3_column_double(stmt, col);
    case SQLITE_TEXT: {
      const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt, col));
      return std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt, col)));
    }
    case SQLITE_BLOB: {
      const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt, col));
      const auto n = static_cast<std::size_t>(sqlite3_column_bytes(stmt, col));
      return Blob{std::vector<std::uint8_t>(p, p + n)};
    }
    default:
      return std::monostate{};
  }
}

}  // namespace

void Connection::Closer::operator()(sqlite3* db) const noexcept { sqlite3_close_v2(db); }

Connection::Connection(std::unique_ptr<sqlite3, Closer> db, std::filesystem::path path)
    : db_(std::move(db)), path_(std::move(path)) {}
Connection::Connection(Connection&&) noexcept = default;
Connection& Connection::operator=(Connection&&) noexcept = default;
Connection::~Connection() = default;

Connection Connection::open_read_only(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw DatabaseUnreadable(path.string(), "no such database file");
  sqlite3* raw = nullptr;
  const std::string uri = uri_for(path, "mode=ro");
  const int rc = sqlite3_open_v2(uri.c_str(), &raw, SQLITE_OPEN_READONLY | SQLITE_OPEN_URI | SQLITE_OPEN_NOMUTEX,
                                 nullptr);
  std::unique_ptr<sqlite3, Closer> db(raw);
  if (rc != SQLITE_OK) {
    throw DatabaseUnreadable(path.string(), raw ? sqlite3_errmsg(raw) : sqlite3_errstr(rc));
  }
  Connection conn(std::move(db), path);
  // Forces the header to be read so a non-database file fails here.
  char* err = nullptr;
  if (sqlite3_exec(conn.handle(), "PRAGMA query_only = ON; SELECT count(*) FROM sqlite_master;", nullptr, nullptr,
                   &err) != SQLITE_OK) {
    std::string msg = err ? err : "unreadable";
    sqlite3_free(err);
    throw DatabaseUnreadable(path.string(), msg);
  }
  return conn;
}

Connection Connection::open_writable(const std::filesystem::path& path) {
  sqlite3* raw = nullptr;
  const int rc = sqlite3_open_v2(path.string().c_str(), &raw, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr);
  std::unique_ptr<sqlite3, Closer> db(raw);
  if (rc != SQLITE_OK) throw DatabaseUnreadable(path.string(), raw ? sqlite3_errmsg(raw) : sqlite3_errstr(rc));
  return Connection(std::move(db), path);
}

void Connection::execute_script(std::string_view sql) {
  const std::string script(sql);
  char* err = nullptr;
  if (sqlite3_exec(handle(), script.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "script failed";
    sqlite3_free(err);
    throw Error("ExecError", path_.string() + ": " + msg);
  }
}

QueryResult Connection::run_select(std::string_view sql, std::chrono::milliseconds timeout) const {
  QueryResult result;
  const std::string keyword = leading_keyword(sql);
  if (keyword != "SELECT" && keyword != "WITH" && keyword != "VALUES") {
    result.status = keyword.empty() ? QueryStatus::ExecError : QueryStatus::WriteAttempt;
    result.message = keyword.empty() ? "empty statement" : "only a single SELECT statement is allowed, got " + keyword;
    return result;
  }

  sqlite3_stmt* raw = nullptr;
  const char* tail = nullptr;
  const int rc = sqlite3_prepare_v2(handle(), sql.data(), static_cast<int>(sql.size()), &raw, &tail);
  Statement stmt(raw);
  if (rc != SQLITE_OK) {
    result.status = QueryStatus::ExecError;
    result.message = sqlite3_errmsg(handle());
    return result;
  }
  if (!stmt) {
    result.status = QueryStatus::ExecError;
    result.message = "empty statement";
    return result;
  }
  const std::size_t consumed = tail ? static_cast<std::size_t>(tail - sql.data()) : sql.size();
  if (!skip_trivia(sql.substr(consumed), true).empty()) {
    result.status = QueryStatus::WriteAttempt;
    result.message = "multiple statements are not allowed";
    return result;
  }
  if (!sqlite3_stmt_readonly(stmt.get())) {
    result.status = QueryStatus::WriteAttempt;
    result.message = "statement would modify the database";
    return result;
  }

  const int ncols = sqlite3_column_count(stmt.get());
  for (int c = 0; c < ncols; ++c) {
    const char* name = sqlite3_column_name(stmt.get(), c);
    result.table.columns.emplace_back(name ? name : "");
  }

  Deadline deadline{std::chrono::steady_clock::now() + timeout};
  sqlite3_progress_handler(handle(), 1000, &progress_callback, &deadline);
  int step = SQLITE_ROW;
  while ((step = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    Row row;
    row.reserve(static_cast<std::size_t>(ncols));
    for (int c = 0; c < ncols; ++c) row.push_back(read_value(stmt.get(), c));
    result.table.rows.push_back(std::move(row));
  }
  sqlite3_progress_handler(handle(), 0, nullptr, nullptr);

  if (step == SQLITE_INTERRUPT) {
    result.status = QueryStatus::Timeout;
    result.message = "query exceeded " + std::to_string(timeout.count()) + " ms";
    result.table.rows.clear();
  } else if (step != SQLITE_DONE) {
    result.status = QueryStatus::ExecError;
    result.message = sqlite3_errmsg(handle());
    result.table.rows.clear();
  }
  return result;
}

void build_database(const std::filesystem::path& path, std::string_view script) {
  std::error_code ec;
  std::filesystem::remove(path, ec);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto conn = Connection::open_writable(path);
  conn.execute_script(script);
}

std::string quote_identifier(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace db
}  // namespace nl2sql
