#include "nl2sql/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/sqlite_db.hpp"

namespace nl2sql {

using json = nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) { return lower(a) == lower(b); }

std::string sql_string_literal(std::string_view value) {
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

json parse_json_document(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(source, -1, std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& obj, const char* field, std::ptrdiff_t index) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) throw MissingField(field, index);
  return *it;
}

std::string require_string(const json& obj, const char* field, std::ptrdiff_t index, const std::string& source) {
  const json& v = require(obj, field, index);
  if (!v.is_string()) throw FormatError(source, index, std::string("field \"") + field + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

const ColumnSchema* TableSchema::find_column(std::string_view column) const {
  for (const auto& c : columns) {
    if (iequals(c.name, column)) return &c;
  }
  return nullptr;
}

const TableSchema* DbSchema::find_table(std::string_view table) const {
  for (const auto& t : tables) {
    if (iequals(t.name, table)) return &t;
  }
  return nullptr;
}

std::vector<NlSqlExample> parse_examples(std::string_view json_text, const std::string& source,
                                         const std::string& split) {
  const json doc = parse_json_document(json_text, source);
  if (!doc.is_array()) throw FormatError(source, -1, "expected a JSON array of examples");
  std::vector<NlSqlExample> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const json& entry = doc[i];
    if (!entry.is_object()) throw FormatError(source, idx, "expected an object");
    NlSqlExample ex;
    ex.question = require_string(entry, "question", idx, source);
    ex.gold_sql = require_string(entry, "query", idx, source);
    ex.db_id = require_string(entry, "db_id", idx, source);
    if (ex.gold_sql.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw FormatError(source, idx, "field \"query\" is empty");
    }
    ex.source_index = i;
    ex.split = split;
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<NlSqlExample> load_examples(const std::filesystem::path& path, std::optional<std::string> split) {
  return parse_examples(read_file(path), path.string(), split.value_or(path.stem().string()));
}

SchemaCatalog parse_schemas(std::string_view json_text, const std::string& source) {
  const json doc = parse_json_document(json_text, source);
  if (!doc.is_array()) throw FormatError(source, -1, "expected a JSON array of schemas");
  SchemaCatalog catalog;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const json& entry = doc[i];
    if (!entry.is_object()) throw FormatError(source, idx, "expected an object");

    DbSchema schema;
    schema.db_id = require_string(entry, "db_id", idx, source);
    if (catalog.contains(schema.db_id)) throw FormatError(source, idx, "duplicate db_id \"" + schema.db_id + "\"");

    const json& tables = entry.contains("table_names_original") ? entry["table_names_original"]
                                                                : require(entry, "table_names", idx);
    const json& columns = entry.contains("column_names_original") ? entry["column_names_original"]
                                                                  : require(entry, "column_names", idx);
    const json empty = json::array();
    const json& types = entry.contains("column_types") ? entry["column_types"] : empty;
    if (!tables.is_array() || !columns.is_array()) throw FormatError(source, idx, "malformed table/column lists");

    std::set<std::string> seen_tables;
    for (const auto& t : tables) {
      if (!t.is_string()) throw FormatError(source, idx, "table name must be a string");
      TableSchema table;
      table.name = t.get<std::string>();
      if (!seen_tables.insert(lower(table.name)).second) {
        throw FormatError(source, idx, "duplicate table \"" + table.name + "\"");
      }
      schema.tables.push_back(std::move(table));
    }

    // Column index -> (table index, column index within table); index 0 is "*".
    std::vector<std::pair<std::ptrdiff_t, std::size_t>> column_slots;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const json& col = columns[c];
      if (!col.is_array() || col.size() != 2 || !col[0].is_number_integer() || !col[1].is_string()) {
        throw FormatError(source, idx, "malformed column entry " + std::to_string(c));
      }
      const auto table_index = col[0].get<std::ptrdiff_t>();
      if (table_index < 0) {
        column_slots.emplace_back(-1, 0);
        continue;
      }
      if (static_cast<std::size_t>(table_index) >= schema.tables.size()) {
        throw FormatError(source, idx, "column " + std::to_string(c) + " refers to missing table");
      }
      auto& table = schema.tables[static_cast<std::size_t>(table_index)];
      ColumnSchema column;
      column.name = col[1].get<std::string>();
      if (table.find_column(column.name)) {
        throw FormatError(source, idx, "duplicate column \"" + column.name + "\" in table \"" + table.name + "\"");
      }
      if (c < types.size() && types[c].is_string()) column.type = types[c].get<std::string>();
      column_slots.emplace_back(table_index, table.columns.size());
      table.columns.push_back(std::move(column));
    }

    auto resolve = [&](const json& v) -> ColumnSchema* {
      if (!v.is_number_integer()) return nullptr;
      const auto c = v.get<std::ptrdiff_t>();
      if (c < 0 || static_cast<std::size_t>(c) >= column_slots.size()) return nullptr;
      const auto [t, k] = column_slots[static_cast<std::size_t>(c)];
      if (t < 0) return nullptr;
      return &schema.tables[static_cast<std::size_t>(t)].columns[k];
    };
    auto table_of = [&](const json& v) -> const std::string& {
      return schema.tables[static_cast<std::size_t>(column_slots[v.get<std::size_t>()].first)].name;
    };

    if (entry.contains("primary_keys") && entry["primary_keys"].is_array()) {
      for (const auto& pk : entry["primary_keys"]) {
        // Composite keys appear as nested arrays in newer catalog versions.
        const json members = pk.is_array() ? pk : json::array({pk});
        for (const auto& m : members) {
          if (auto* col = resolve(m)) col->is_primary_key = true;
        }
      }
    }

    if (entry.contains("foreign_keys") && entry["foreign_keys"].is_array()) {
      for (std::size_t f = 0; f < entry["foreign_keys"].size(); ++f) {
        const json& fk = entry["foreign_keys"][f];
        const ColumnSchema* child = fk.is_array() && fk.size() == 2 ? resolve(fk[0]) : nullptr;
        const ColumnSchema* parent = fk.is_array() && fk.size() == 2 ? resolve(fk[1]) : nullptr;
        if (!child || !parent) {
          schema.dangling_foreign_keys.push_back("foreign key " + std::to_string(f) + ": " + fk.dump());
          continue;
        }
        schema.foreign_keys.push_back({table_of(fk[0]), child->name, table_of(fk[1]), parent->name});
      }
    }
    catalog.emplace(schema.db_id, std::move(schema));
  }
  return catalog;
}

SchemaCatalog load_schemas(const std::filesystem::path& path) { return parse_schemas(read_file(path), path.string()); }

DbSchema read_schema_from_database(const std::string& db_id, const std::filesystem::path& db_file) {
  const auto conn = db::Connection::open_read_only(db_file);
  constexpr std::chrono::seconds kTimeout{30};
  auto run = [&](const std::string& sql) {
    auto r = conn.run_select(sql, kTimeout);
    if (r.status != db::QueryStatus::Ok) throw DatabaseUnreadable(db_file.string(), r.message);
    return std::move(r.table);
  };
  auto text = [](const Value& v) { return std::holds_alternative<std::string>(v) ? std::get<std::string>(v) : ""; };
  auto integer = [](const Value& v) { return std::holds_alternative<std::int64_t>(v) ? std::get<std::int64_t>(v) : 0; };

  DbSchema schema;
  schema.db_id = db_id;
  const auto tables = run(
      "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' ORDER BY rowid");
  for (const auto& row : tables.rows) {
    TableSchema table;
    table.name = text(row[0]);
    const std::string quoted = sql_string_literal(table.name);
    // cid, name, type, notnull, dflt_value, pk
    const auto info = run("SELECT name, type, \"notnull\", pk FROM pragma_table_info(" + quoted + ") ORDER BY cid");
    for (const auto& c : info.rows) {
      table.columns.push_back({text(c[0]), text(c[1]), integer(c[3]) > 0, integer(c[2]) != 0});
    }
    const auto fks = run("SELECT \"table\", \"from\", \"to\" FROM pragma_foreign_key_list(" + quoted +
                         ") ORDER BY id, seq");
    for (const auto& f : fks.rows) {
      ForeignKey fk{table.name, text(f[1]), text(f[0]), text(f[2])};
      schema.foreign_keys.push_back(std::move(fk));
    }
    schema.tables.push_back(std::move(table));
  }
  // Foreign keys with an implicit parent column, or pointing at missing tables.
  std::vector<ForeignKey> resolved;
  for (auto& fk : schema.foreign_keys) {
    const TableSchema* parent = schema.find_table(fk.parent_table);
    if (parent && fk.parent_column.empty()) {
      for (const auto& c : parent->columns) {
        if (c.is_primary_key) {
          fk.parent_column = c.name;
          break;
        }
      }
    }
    if (!parent || !parent->find_column(fk.parent_column)) {
      schema.dangling_foreign_keys.push_back(fk.child_table + "." + fk.child_column + " -> " + fk.parent_table + "." +
                                             fk.parent_column);
      continue;
    }
    resolved.push_back(std::move(fk));
  }
  schema.foreign_keys = std::move(resolved);
  return schema;
}

DbSchema overlay_declared_types(const DbSchema& catalog, const DbSchema& from_database) {
  DbSchema merged = catalog;
  for (auto& table : merged.tables) {
    const TableSchema* actual = from_database.find_table(table.name);
    if (!actual) continue;
    for (auto& column : table.columns) {
      if (const ColumnSchema* c = actual->find_column(column.name)) {
        column.type = c->type;
        column.is_primary_key = c->is_primary_key;
        column.is_not_null = c->is_not_null;
      }
    }
  }
  return merged;
}

std::filesystem::path database_path(const std::filesystem::path& root, std::string_view db_id) {
  const std::string id(db_id);
  return root / "database" / id / (id + ".sqlite");
}

}  // namespace nl2sql
