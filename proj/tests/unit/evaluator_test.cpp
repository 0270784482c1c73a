#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nl2sql/corpus.hpp"
#include "nl2sql/curator.hpp"
#include "nl2sql/digest.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/evaluator.hpp"

using namespace nl2sql;
using nl2sql::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Env {
  TempDir tmp;
  fs::path root;
  Env() : root(nl2sql::testing::materialize_spider(tmp.path())) {}
};

// Keys are db_id/source_index, so a benchmark draws from a single split.
CuratedDataset fixture_benchmark(const fs::path& root, const std::string& split = "train") {
  return passthrough(score_corpus(load_examples(root / (split + ".json"))).items);
}

Prediction fenced(const ScoredExample& it, const std::string& sql) {
  return {prediction_key(it.example), "Answer:\n```sql\n" + sql + "\n```", 1, 0, std::nullopt};
}

CuratedDataset single(const std::string& db, const std::string& gold) {
  NlSqlExample ex{"q", gold, db, 0, "dev"};
  return passthrough({score_example(ex)});
}

Verdict judge_one(const fs::path& root, const std::string& db, const std::string& gold, const std::string& raw,
                  EvaluationSettings settings = {}) {
  const auto ds = single(db, gold);
  Prediction p{prediction_key(ds.items[0].example), raw, 0, 0, std::nullopt};
  return evaluate({p}, ds, root, settings).outcomes[0].verdict;
}

}  // namespace

TEST(Extraction, PrefersLastSqlFence) {
  EXPECT_EQ(extract_sql("```sql\nSELECT 1\n```\nthen\n```sql\nSELECT 2\n```"), "SELECT 2");
  EXPECT_EQ(extract_sql("```SQLite\nSELECT 3\n```"), "SELECT 3");
  EXPECT_EQ(extract_sql("text\n```\nSELECT 4\n```"), "SELECT 4");
  EXPECT_EQ(extract_sql("```python\nprint(1)\n```"), "");
  EXPECT_EQ(extract_sql("  SELECT 5  "), "SELECT 5");
  EXPECT_EQ(extract_sql(""), "");
}

TEST(OrderBy, DetectsOnlyTopLevel) {
  EXPECT_TRUE(has_top_level_order_by("SELECT a FROM t ORDER BY a"));
  EXPECT_FALSE(has_top_level_order_by("SELECT a FROM (SELECT a FROM t ORDER BY a LIMIT 3)"));
  EXPECT_FALSE(has_top_level_order_by("SELECT 'ORDER BY' FROM t"));
  EXPECT_TRUE(has_top_level_order_by("SELECT a FROM t UNION SELECT b FROM u ORDER BY 1"));
}

TEST(Evaluate, GoldAgainstItselfIsAllCorrectAndReadOnly) {
  Env env;
  std::map<std::string, std::string> before;
  for (const auto& e : fs::recursive_directory_iterator(env.root / "database")) {
    if (e.path().extension() == ".sqlite") before[e.path().string()] = sha256_file(e.path());
  }
  for (const char* split : {"train", "dev"}) {
    const auto bench = fixture_benchmark(env.root, split);
    PredictionSet preds;
    for (const auto& it : bench.items) preds.push_back(fenced(it, it.example.gold_sql));
    EvaluationSettings s;
    s.workers = 3;
    const auto report = evaluate(preds, bench, env.root, s);
    EXPECT_EQ(report.overall.correct, bench.items.size()) << split;
    EXPECT_EQ(report.overall.accuracy_percent(), "100.00") << split;
  }
  for (const auto& [path, digest] : before) EXPECT_EQ(sha256_file(path), digest) << path;
}

TEST(Evaluate, ParallelAndSerialAgree) {
  Env env;
  const auto bench = fixture_benchmark(env.root);
  PredictionSet preds;
  for (std::size_t i = 0; i < bench.items.size(); ++i) {
    preds.push_back(fenced(bench.items[i], i % 3 ? bench.items[i].example.gold_sql : "SELECT 1"));
  }
  EvaluationSettings serial, parallel;
  parallel.workers = 4;
  const auto a = evaluate(preds, bench, env.root, serial);
  const auto b = evaluate(preds, bench, env.root, parallel);
  EXPECT_EQ(a.outcomes, b.outcomes);
  EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(Evaluate, ClassifiesEveryVerdict) {
  Env env;
  const auto& r = env.root;
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT count(*) FROM Pets", "```sql\nSELECT count(*) FROM Pets\n```"),
            Verdict::Correct);
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT count(*) FROM Pets", "```sql\nSELECT count(*) FROM Student\n```"),
            Verdict::ResultMismatch);
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT count(*) FROM Pets", "```sql\nSELECT count(*) FROM Dogs\n```"),
            Verdict::ExecutionFailed);
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT count(*) FROM Pets", "```sql\nDELETE FROM Pets\n```"),
            Verdict::ExecutionFailed);
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT count(*) FROM Pets", "```python\nprint()\n```"),
            Verdict::ExtractionFailed);
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT nope FROM Pets", "```sql\nSELECT 1\n```"), Verdict::GoldFailed);
  EvaluationSettings quick;
  quick.timeout = std::chrono::milliseconds(100);
  EXPECT_EQ(judge_one(r, "pets_1", "SELECT count(*) FROM Pets",
                      "```sql\nWITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM c) SELECT max(x) FROM c\n```",
                      quick),
            Verdict::Timeout);
}

TEST(Evaluate, WriteAttemptsLeaveTheDatabaseUntouched) {
  Env env;
  const auto db = database_path(env.root, "pets_1");
  const auto digest = sha256_file(db);
  for (const char* sql : {"DROP TABLE Pets", "UPDATE Pets SET weight = 0", "SELECT 1; DELETE FROM Pets",
                          "ATTACH DATABASE 'x.db' AS x", "PRAGMA writable_schema = 1"}) {
    EXPECT_EQ(judge_one(env.root, "pets_1", "SELECT 1", std::string("```sql\n") + sql + "\n```"),
              Verdict::ExecutionFailed)
        << sql;
  }
  EXPECT_EQ(sha256_file(db), digest);
}

TEST(Evaluate, RejectsIncompleteOrMismatchedInputs) {
  Env env;
  auto mixed = fixture_benchmark(env.root, "train");
  const auto dev = fixture_benchmark(env.root, "dev");
  mixed.items.insert(mixed.items.end(), dev.items.begin(), dev.items.end());
  PredictionSet all;
  for (const auto& it : mixed.items) all.push_back(fenced(it, "SELECT 1"));
  try {
    evaluate(all, mixed, env.root);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "DuplicateKey");
  }

  const auto bench = fixture_benchmark(env.root);
  PredictionSet preds;
  for (std::size_t i = 1; i < bench.items.size(); ++i) preds.push_back(fenced(bench.items[i], "SELECT 1"));
  try {
    evaluate(preds, bench, env.root);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "IncompletePredictions");
  }
  const auto ghost = single("no_such_db", "SELECT 1");
  try {
    evaluate({fenced(ghost.items[0], "SELECT 1")}, ghost, env.root);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "MissingDatabase");
  }
}

TEST(Evaluate, TransportFailuresCountAsExtractionFailures) {
  Env env;
  const auto ds = single("pets_1", "SELECT count(*) FROM Pets");
  Prediction p{prediction_key(ds.items[0].example), "", 0, 5, "EndpointUnreachable: 503"};
  const auto report = evaluate({p}, ds, env.root);
  EXPECT_EQ(report.outcomes[0].verdict, Verdict::ExtractionFailed);
  EXPECT_EQ(report.failure_count(), 1u);
}

TEST(Tally, AccuracyArithmeticAndFailureCount) {
  EvaluationReport r;
  for (std::size_t i = 0; i < 600; ++i) {
    Verdict v = i < 327 ? Verdict::Correct : (i < 327 + 200 ? Verdict::ExecutionFailed : Verdict::ResultMismatch);
    if (i >= 590) v = Verdict::ExtractionFailed;
    r.outcomes.push_back({"k" + std::to_string(i), v, "", kAllBuckets[i % 3]});
  }
  tally_outcomes(r);
  EXPECT_EQ(r.overall.accuracy_percent(), "54.50");
  EXPECT_EQ(r.failure_count(), 200u + 10u);
  EXPECT_EQ(r.buckets[0].total + r.buckets[1].total + r.buckets[2].total, 600u);
}

TEST(Tally, GoldFailuresAreExcludedFromTheDenominator) {
  EvaluationReport r;
  r.outcomes = {{"a", Verdict::Correct, "", DifficultyBucket::Easy},
                {"b", Verdict::GoldFailed, "", DifficultyBucket::Easy},
                {"c", Verdict::ResultMismatch, "", DifficultyBucket::Hard}};
  tally_outcomes(r);
  EXPECT_EQ(r.overall.judged(), 2u);
  EXPECT_EQ(r.overall.accuracy_percent(), "50.00");
  EXPECT_EQ(r.buckets[static_cast<std::size_t>(DifficultyBucket::Easy)].accuracy_percent(), "100.00");
}

TEST(Report, JsonRoundTripPreservesSummary) {
  EvaluationReport r;
  r.outcomes = {{"db/0", Verdict::Correct, "", DifficultyBucket::Hard},
                {"db/1", Verdict::Timeout, "slow", DifficultyBucket::Medium}};
  r.dataset_digest = "abc";
  r.predictions_digest = "def";
  tally_outcomes(r);
  const auto back = report_from_json(report_to_json(r), "mem");
  EXPECT_EQ(back.outcomes, r.outcomes);
  EXPECT_EQ(back.overall, r.overall);
  EXPECT_EQ(back.verdict_counts, r.verdict_counts);
  EXPECT_EQ(back.dataset_digest, "abc");
  EXPECT_EQ(report_to_json(back), report_to_json(r));
  EXPECT_THROW(report_from_json("{}", "mem"), FormatError);
  EXPECT_NE(render_report_summary(r).find("Execution accuracy: 50.00%"), std::string::npos);
  EXPECT_EQ(parse_verdict("RESULT_MISMATCH"), Verdict::ResultMismatch);
}
