#include <gtest/gtest.h>

#include "nl2sql/error.hpp"
#include "nl2sql/sql/inventory.hpp"
#include "nl2sql/sql/lexer.hpp"
#include "nl2sql/sql/parser.hpp"
#include "nl2sql/sql/printer.hpp"

using namespace nl2sql;
using namespace nl2sql::sql;

TEST(Parser, RoundTripsThroughPrinter) {
  const char* queries[] = {
      "SELECT T1.name FROM singer AS T1 JOIN concert AS T2 ON T1.id = T2.sid WHERE T2.year = 2014",
      "SELECT country, count(*) FROM singer GROUP BY country HAVING count(*) > 1 ORDER BY 2 DESC LIMIT 3",
      "SELECT a FROM t UNION ALL SELECT b FROM u EXCEPT SELECT c FROM v",
      "WITH x AS (SELECT 1 AS n) SELECT n FROM x",
      "SELECT CASE WHEN a IS NULL THEN 'n' ELSE 'y' END FROM t WHERE b NOT IN (SELECT b FROM u)",
      "SELECT name FROM t WHERE x BETWEEN 1 AND 2 AND y LIKE '%a%' AND NOT EXISTS (SELECT 1 FROM u)",
  };
  for (const char* q : queries) {
    const auto first = parse_sql(q);
    const std::string printed = to_sql(first);
    const auto second = parse_sql(printed);
    EXPECT_EQ(printed, to_sql(second)) << q;
    EXPECT_EQ(clause_inventory(first), clause_inventory(second)) << q;
  }
}

TEST(Parser, AcceptsTrailingSemicolonAndComments) {
  EXPECT_NO_THROW(parse_sql("SELECT 1; "));
  EXPECT_NO_THROW(parse_sql("SELECT a -- note\nFROM t /* block */"));
}

TEST(Parser, RejectsMalformedInputWithPosition) {
  try {
    parse_sql("SELECT name FROM WHERE x = 1");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.kind(), "SyntaxError");
    EXPECT_GT(e.position(), 0u);
  }
  EXPECT_THROW(parse_sql("SELECT (a FROM t"), SyntaxError);
  EXPECT_THROW(parse_sql(""), SyntaxError);
}

TEST(Parser, RejectsNonSelectStatements) {
  EXPECT_THROW(parse_sql("DELETE FROM singer"), UnsupportedStatement);
  EXPECT_THROW(parse_sql("INSERT INTO t VALUES (1)"), UnsupportedStatement);
  EXPECT_THROW(parse_sql("DROP TABLE t"), UnsupportedStatement);
}

TEST(Inventory, CountsClausesPerSelect) {
  const auto inv = clause_inventory(parse_sql(
      "SELECT DISTINCT a, count(*) FROM t JOIN u ON t.x = u.x, v GROUP BY a HAVING sum(b) > 1 ORDER BY a LIMIT 2"));
  EXPECT_EQ(inv.join_count, 2u);
  EXPECT_TRUE(inv.has_group_by);
  EXPECT_TRUE(inv.has_having);
  EXPECT_TRUE(inv.has_order_by);
  EXPECT_TRUE(inv.has_limit);
  EXPECT_TRUE(inv.has_distinct);
  EXPECT_EQ(inv.aggregate_count, 2u);
  EXPECT_TRUE(inv.subqueries.empty());
}

TEST(Inventory, NestedSelectsAreChildrenInSourceOrder) {
  const auto inv = clause_inventory(parse_sql(
      "SELECT (SELECT max(a) FROM t) FROM (SELECT a FROM t JOIN u ON 1) AS s WHERE a IN (SELECT a FROM v "
      "GROUP BY a) UNION SELECT b FROM w ORDER BY 1"));
  ASSERT_EQ(inv.subqueries.size(), 4u);
  EXPECT_EQ(inv.subqueries[0].aggregate_count, 1u);
  EXPECT_EQ(inv.subqueries[1].join_count, 1u);
  EXPECT_TRUE(inv.subqueries[2].has_group_by);
  EXPECT_FALSE(inv.subqueries[3].has_order_by);
  EXPECT_TRUE(inv.has_order_by);  // a compound's ORDER BY belongs to the whole statement
  EXPECT_EQ(total_subqueries(inv), 4u);
}

TEST(Inventory, AggregateNamesAreCaseInsensitive) {
  EXPECT_TRUE(is_aggregate_function("Count"));
  EXPECT_TRUE(is_aggregate_function("group_concat"));
  EXPECT_FALSE(is_aggregate_function("round"));
}

TEST(Lexer, KeepsQuotedTextOpaque) {
  const auto toks = tokenize("SELECT 'a JOIN b', \"x y\" FROM t");
  ASSERT_GE(toks.size(), 5u);
  EXPECT_EQ(clause_inventory(parse_sql("SELECT 'a JOIN b', \"x y\" FROM t")).join_count, 0u);
}
