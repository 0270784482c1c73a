#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/example.hpp"

namespace nl2sql {

struct ColumnSchema {
  std::string name;
  std::string type;  // declared type, verbatim
  bool is_primary_key = false;
  bool is_not_null = false;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSchema> columns;

  const ColumnSchema* find_column(std::string_view column) const;
  friend bool operator==(const TableSchema&, const TableSchema&) = default;
};

struct ForeignKey {
  std::string child_table;
  std::string child_column;
  std::string parent_table;
  std::string parent_column;

  friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
};

struct DbSchema {
  std::string db_id;
  std::vector<TableSchema> tables;
  std::vector<ForeignKey> foreign_keys;
  /// Foreign keys whose endpoints could not be resolved; kept, not fatal.
  std::vector<std::string> dangling_foreign_keys;

  /// Case-insensitive lookup.
  const TableSchema* find_table(std::string_view table) const;
};

using SchemaCatalog = std::map<std::string, DbSchema>;

/// Loads a Spider examples file: a JSON array of objects with "question",
/// "query" and "db_id". `split` defaults to the file stem.
std::vector<NlSqlExample> load_examples(const std::filesystem::path& path, std::optional<std::string> split = {});
std::vector<NlSqlExample> parse_examples(std::string_view json_text, const std::string& source,
                                         const std::string& split);

/// Loads a Spider tables catalog (tables.json). Column indices in
/// primary_keys / foreign_keys are resolved to names.
SchemaCatalog load_schemas(const std::filesystem::path& path);
SchemaCatalog parse_schemas(std::string_view json_text, const std::string& source);

/// Reads tables, declared types, PK / NOT NULL flags and foreign keys from a
/// database file. Throws DatabaseUnreadable.
DbSchema read_schema_from_database(const std::string& db_id, const std::filesystem::path& db_file);

/// Catalog structure with declared types and constraint flags taken from the
/// database where table and column names match (case-insensitively).
DbSchema overlay_declared_types(const DbSchema& catalog, const DbSchema& from_database);

/// <root>/database/<db_id>/<db_id>.sqlite
std::filesystem::path database_path(const std::filesystem::path& root, std::string_view db_id);

struct DescribeOptions {
  bool include_samples = false;
  std::size_t sample_count = 3;
};

struct SchemaDescription {
  std::string db_id;
  std::string text;
  bool included_samples = false;
  std::size_t sample_count = 0;
  std::vector<std::string> warnings;
};

/// Renders one "Table: <name>" block per table, one "<column> <TYPE>[ PRIMARY
/// KEY][ NOT NULL]" line per column, blocks separated by a blank line. With
/// samples, each column line is followed by "-- samples: v1, v2, ..." holding
/// the first distinct non-null values in rowid order.
SchemaDescription describe_schema(const DbSchema& schema, const DescribeOptions& options = {},
                                  const std::optional<std::filesystem::path>& db_file = std::nullopt);

}  // namespace nl2sql
