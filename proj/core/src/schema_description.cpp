#include "nl2sql/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <set>

#include "nl2sql/error.hpp"
#include "nl2sql/sqlite_db.hpp"

namespace nl2sql {

namespace {

constexpr std::chrono::seconds kSampleTimeout{10};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string sample_text(const Value& v) {
  std::string s = value_to_text(v);
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string column_line(const ColumnSchema& c) {
  std::string line = c.name;
  if (!c.type.empty()) line += " " + c.type;
  if (c.is_primary_key) line += " PRIMARY KEY";
  if (c.is_not_null) line += " NOT NULL";
  return line;
}

// First `count` distinct non-null values of a column, ordered by the rowid of
// their first occurrence. Falls back to engine order for WITHOUT ROWID tables.
std::vector<std::string> first_distinct_values(const db::Connection& conn, const std::string& table,
                                               const std::string& column, std::size_t count) {
  const std::string t = db::quote_identifier(table);
  const std::string c = db::quote_identifier(column);
  const std::string n = std::to_string(count);
  auto result = conn.run_select("SELECT v FROM (SELECT " + c + " AS v, min(rowid) AS r FROM " + t + " WHERE " + c +
                                    " IS NOT NULL GROUP BY " + c + ") ORDER BY r LIMIT " + n,
                                kSampleTimeout);
  if (result.status != db::QueryStatus::Ok) {
    result = conn.run_select("SELECT DISTINCT " + c + " FROM " + t + " WHERE " + c + " IS NOT NULL LIMIT " + n,
                             kSampleTimeout);
  }
  std::vector<std::string> out;
  if (result.status != db::QueryStatus::Ok) return out;
  for (const auto& row : result.table.rows) out.push_back(sample_text(row[0]));
  return out;
}

}  // namespace

SchemaDescription describe_schema(const DbSchema& schema, const DescribeOptions& options,
                                  const std::optional<std::filesystem::path>& db_file) {
  SchemaDescription desc;
  desc.db_id = schema.db_id;
  desc.included_samples = options.include_samples;
  desc.sample_count = options.include_samples ? options.sample_count : 0;

  std::optional<db::Connection> conn;
  std::set<std::string> db_tables;
  if (options.include_samples) {
    if (!db_file) throw DatabaseUnreadable("<none>", "sample values requested without a database file");
    conn.emplace(db::Connection::open_read_only(*db_file));
    const auto names = conn->run_select("SELECT name FROM sqlite_master WHERE type IN ('table', 'view')",
                                        kSampleTimeout);
    for (const auto& row : names.table.rows) db_tables.insert(lower(value_to_text(row[0])));
  }

  std::string text;
  for (std::size_t t = 0; t < schema.tables.size(); ++t) {
    const auto& table = schema.tables[t];
    if (t) text += "\n\n";
    text += "Table: " + table.name;
    const bool sample_this = conn && db_tables.contains(lower(table.name));
    if (conn && !sample_this) {
      desc.warnings.push_back("TableMissingInDbFile: " + table.name + " not found in " + db_file->string() +
                              "; samples omitted");
    }
    for (const auto& column : table.columns) {
      text += "\n" + column_line(column);
      if (!sample_this || options.sample_count == 0) continue;
      const auto values = first_distinct_values(*conn, table.name, column.name, options.sample_count);
      if (values.empty()) continue;
      text += "\n-- samples: ";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text += ", ";
        text += values[i];
      }
    }
  }
  desc.text = std::move(text);
  return desc;
}

}  // namespace nl2sql
