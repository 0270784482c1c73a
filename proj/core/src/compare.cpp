#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>

#include "nl2sql/error.hpp"
#include "nl2sql/evaluator.hpp"
#include "nl2sql/sql/lexer.hpp"
#include "nl2sql/sql/parser.hpp"

namespace nl2sql {

namespace {

// Above this many candidate rows in one group the exhaustive matching is
// skipped and the sorted comparison's answer stands.
constexpr std::size_t kMatchingLimit = 4096;

bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

// Kind rank for the canonical sort: NULL < number < text < blob.
int rank(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return 0;
  if (is_numeric(v)) return 1;
  if (std::holds_alternative<std::string>(v)) return 2;
  return 3;
}

int compare_values(const Value& a, const Value& b) {
  const int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0: return 0;
    case 1: {
      if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
        const auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
        return x < y ? -1 : (x > y ? 1 : 0);
      }
      const double x = as_double(a), y = as_double(b);
      if (std::isnan(x) || std::isnan(y)) return std::isnan(x) == std::isnan(y) ? 0 : (std::isnan(x) ? -1 : 1);
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case 2: {
      const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default: {
      const auto& x = std::get<Blob>(a);
      const auto& y = std::get<Blob>(b);
      return x < y ? -1 : (y < x ? 1 : 0);
    }
  }
}

bool row_less(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    const int c = compare_values(a[i], b[i]);
    if (c) return c < 0;
  }
  return a.size() < b.size();
}

bool has_real(const std::vector<Row>& rows) {
  for (const auto& r : rows) {
    for (const auto& v : r) {
      if (std::holds_alternative<double>(v)) return true;
    }
  }
  return false;
}

std::vector<Row> sorted_rows(std::vector<Row> rows) {
  std::sort(rows.begin(), rows.end(), row_less);
  return rows;
}

// Adjacent tolerant duplicates collapse after sorting.
std::vector<Row> distinct_rows(std::vector<Row> rows, const CompareSettings& s) {
  rows = sorted_rows(std::move(rows));
  std::vector<Row> out;
  for (auto& r : rows) {
    if (out.empty() || !rows_equal(out.back(), r, s)) out.push_back(std::move(r));
  }
  return out;
}

// Part of a row that tolerance cannot bridge: rows with different keys never match.
std::vector<Value> exact_key(const Row& row) {
  std::vector<Value> key;
  key.reserve(row.size());
  for (const auto& v : row) key.push_back(is_numeric(v) ? Value{std::int64_t{0}} : v);
  return key;
}

// Perfect matching between equal-sized row groups via augmenting paths.
bool perfect_matching(const std::vector<const Row*>& left, const std::vector<const Row*>& right,
                      const CompareSettings& s) {
  const std::size_t n = left.size();
  if (n != right.size()) return false;
  if (n > kMatchingLimit) return false;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rows_equal(*left[i], *right[j], s)) adj[i].push_back(j);
    }
    if (adj[i].empty()) return false;
  }
  std::vector<std::ptrdiff_t> match_right(n, -1);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j : adj[i]) {
      if (visited[j]) continue;
      visited[j] = 1;
      if (match_right[j] < 0 || augment(static_cast<std::size_t>(match_right[j]))) {
        match_right[j] = static_cast<std::ptrdiff_t>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    visited.assign(n, 0);
    if (!augment(i)) return false;
  }
  return true;
}

bool multiset_equal(const std::vector<Row>& gold, const std::vector<Row>& pred, const CompareSettings& s) {
  const auto a = sorted_rows(gold);
  const auto b = sorted_rows(pred);
  bool pairwise = true;
  for (std::size_t i = 0; i < a.size() && pairwise; ++i) pairwise = rows_equal(a[i], b[i], s);
  if (pairwise) return true;
  // Sorting can separate rows that are equal within tolerance only when
  // reals are involved; otherwise the sorted answer is exact.
  if (!has_real(gold) && !has_real(pred)) return false;

  std::map<std::vector<Value>, std::pair<std::vector<const Row*>, std::vector<const Row*>>,
           std::function<bool(const std::vector<Value>&, const std::vector<Value>&)>>
      groups(row_less);
  for (const auto& r : a) groups[exact_key(r)].first.push_back(&r);
  for (const auto& r : b) groups[exact_key(r)].second.push_back(&r);
  for (const auto& [key, sides] : groups) {
    if (!perfect_matching(sides.first, sides.second, s)) return false;
  }
  return true;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

bool values_equal(const Value& a, const Value& b, const CompareSettings& s) {
  if (is_numeric(a) && is_numeric(b)) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
      return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
    }
    const double x = as_double(a), y = as_double(b);
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    if (x == y) return true;
    const double scale = std::max(std::fabs(x), std::fabs(y));
    return std::fabs(x - y) <= std::max(s.absolute_tolerance, s.relative_tolerance * scale);
  }
  if (a.index() != b.index()) return false;
  return a == b;
}

bool rows_equal(const Row& a, const Row& b, const CompareSettings& s) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!values_equal(a[i], b[i], s)) return false;
  }
  return true;
}

bool compare_results(const ResultTable& gold, const ResultTable& pred, bool gold_has_order_by,
                     const CompareSettings& s) {
  if (gold.columns.size() != pred.columns.size()) return false;
  if (s.match_column_names) {
    for (std::size_t i = 0; i < gold.columns.size(); ++i) {
      if (lower(gold.columns[i]) != lower(pred.columns[i])) return false;
    }
  }
  const bool ordered = gold_has_order_by && s.respect_gold_order;
  if (!s.duplicates_significant) {
    if (ordered) {
      // Keep first occurrences so the order survives de-duplication.
      auto dedupe = [&](const std::vector<Row>& rows) {
        std::vector<Row> out;
        for (const auto& r : rows) {
          const bool seen = std::any_of(out.begin(), out.end(), [&](const Row& o) { return rows_equal(o, r, s); });
          if (!seen) out.push_back(r);
        }
        return out;
      };
      const auto a = dedupe(gold.rows), b = dedupe(pred.rows);
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!rows_equal(a[i], b[i], s)) return false;
      }
      return true;
    }
    const auto a = distinct_rows(gold.rows, s), b = distinct_rows(pred.rows, s);
    return a.size() == b.size() && multiset_equal(a, b, s);
  }
  if (gold.rows.size() != pred.rows.size()) return false;
  if (ordered) {
    for (std::size_t i = 0; i < gold.rows.size(); ++i) {
      if (!rows_equal(gold.rows[i], pred.rows[i], s)) return false;
    }
    return true;
  }
  return multiset_equal(gold.rows, pred.rows, s);
}

bool has_top_level_order_by(std::string_view sql) {
  try {
    const auto ast = sql::parse_sql(sql);
    return !ast.root.order_by.empty();
  } catch (const Error&) {
  }
  // Fallback for dialect the parser does not cover.
  try {
    const auto tokens = sql::tokenize(sql);
    int depth = 0;
    bool found = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      if (t.is_punct("(")) ++depth;
      if (t.is_punct(")")) --depth;
      if (depth == 0 && t.is_keyword("ORDER") && i + 1 < tokens.size() && tokens[i + 1].is_keyword("BY")) found = true;
    }
    return found;
  } catch (const Error&) {
    return lower(sql).find("order by") != std::string::npos;
  }
}

}  // namespace nl2sql
