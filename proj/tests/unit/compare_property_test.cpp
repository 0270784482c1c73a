#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "compare_properties.hpp"
#include "fixtures.hpp"
#include "nl2sql/corpus.hpp"
#include "nl2sql/curator.hpp"
#include "nl2sql/evaluator.hpp"
#include "nl2sql/sql/parser.hpp"
#include "nl2sql/sql/printer.hpp"

using namespace nl2sql;

namespace {

constexpr int kCases = 1000;

void expect_property(const nl2sql::testing::PropertyResult& r) {
  EXPECT_GE(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.failures << " failing cases, first " << r.first_failure;
}

}  // namespace

TEST(CompareProperty, RowPermutationInvarianceWithoutOrderBy) {
  expect_property(nl2sql::testing::permutation_invariance(kCases, 1));
}

TEST(CompareProperty, OrderSensitivityWithOrderBy) { expect_property(nl2sql::testing::order_sensitivity(kCases, 2)); }

TEST(CompareProperty, DuplicateRowSensitivity) { expect_property(nl2sql::testing::duplicate_sensitivity(kCases, 3)); }

TEST(CompareProperty, NumericToleranceIsRelativeOneInAMillion) {
  expect_property(nl2sql::testing::relative_tolerance(kCases, 4));
}

TEST(CompareProperty, ToleranceMatchingIgnoresRowOrder) {
  expect_property(nl2sql::testing::tolerant_bag_matching(kCases, 6));
}

TEST(CompareProperty, AgreesWithReferenceAndIsSymmetric) {
  expect_property(nl2sql::testing::reference_agreement(kCases, 7));
}

TEST(CompareProperty, IntegerAndRealCompareByValue) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < kCases; ++i) {
    const auto n = static_cast<std::int64_t>(rng() % 1'000'000);
    ASSERT_TRUE(values_equal(Value{n}, Value{static_cast<double>(n)}));
    ASSERT_FALSE(values_equal(Value{n}, Value{std::to_string(n)}));
  }
  ASSERT_TRUE(values_equal(Value{}, Value{}));
  ASSERT_FALSE(values_equal(Value{}, Value{std::int64_t{0}}));
}

TEST(CompareProperty, ColumnCountAndOptionalNames) {
  ResultTable a{{"x"}, {{Value{std::int64_t{1}}}}};
  ResultTable b{{"x", "y"}, {{Value{std::int64_t{1}}, Value{std::int64_t{1}}}}};
  ResultTable c{{"z"}, {{Value{std::int64_t{1}}}}};
  EXPECT_FALSE(compare_results(a, b, false));
  EXPECT_TRUE(compare_results(a, c, false));
  CompareSettings named;
  named.match_column_names = true;
  EXPECT_FALSE(compare_results(a, c, false, named));
}

// Removing the WHERE clause of a gold query must be caught whenever it
// changes the result, and only then.
TEST(CompareProperty, DroppingWhereIsDetected) {
  nl2sql::testing::TempDir tmp;
  const auto root = nl2sql::testing::materialize_spider(tmp.path());
  auto examples = load_examples(root / "train.json");
  const auto dev = load_examples(root / "dev.json");
  examples.insert(examples.end(), dev.begin(), dev.end());
  int mutated = 0, detected = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto ast = sql::parse_sql(examples[i].gold_sql);
    if (!ast.root.where || !ast.root.compound.empty()) continue;
    ast.root.where.reset();
    const std::string mutant = sql::to_sql(ast);
    const auto db = database_path(root, examples[i].db_id);
    const auto gold = execute_query(db, examples[i].gold_sql, std::chrono::seconds(5));
    const auto pred = execute_query(db, mutant, std::chrono::seconds(5));
    ASSERT_EQ(pred.status, db::QueryStatus::Ok) << mutant;
    const bool ordered = has_top_level_order_by(examples[i].gold_sql);
    const bool same = nl2sql::testing::reference_equal(gold.table, pred.table, ordered);
    auto item = examples[i];
    item.source_index = i;
    const auto bench = passthrough({score_example(item)});
    const Prediction p{prediction_key(item), "```sql\n" + mutant + "\n```", 0, 0, std::nullopt};
    const auto verdict = evaluate({p}, bench, root).outcomes[0].verdict;
    EXPECT_EQ(verdict, same ? Verdict::Correct : Verdict::ResultMismatch) << mutant;
    ++mutated;
    detected += !same;
  }
  EXPECT_GE(mutated, 10);
  EXPECT_GE(detected, mutated / 2);
}
