// Runs every acceptance criterion and prints one PASS/FAIL/SKIP line each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "compare_properties.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "nl2sql/complexity.hpp"
#include "nl2sql/corpus.hpp"
#include "nl2sql/cot.hpp"
#include "nl2sql/curator.hpp"
#include "nl2sql/dataset_io.hpp"
#include "nl2sql/digest.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/evaluator.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/gateway.hpp"
#include "nl2sql/sql/parser.hpp"
#include "nl2sql/text_format.hpp"
#include "score_oracle.hpp"
#include "stub_server.hpp"
#include "synthetic.hpp"

using namespace nl2sql;
using nl2sql::testing::TempDir;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Status::Skip, std::move(d)}; }

// Collects the first failed expectation of a criterion.
struct Checks {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  Outcome finish(const std::string& summary) const {
    if (failures.empty()) return pass(summary);
    std::string d = failures.front();
    if (failures.size() > 1) d += " (+" + std::to_string(failures.size() - 1) + " more)";
    return fail(d);
  }
};

struct Cli {
  int code;
  std::string out;
  std::string err;
};

Cli nl2sql_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

std::string counts_text(const std::array<std::size_t, 3>& c) {
  return std::to_string(c[2]) + "/" + std::to_string(c[1]) + "/" + std::to_string(c[0]);
}

// ---- 1 -----------------------------------------------------------------------

Outcome scorer_oracle_equivalence() {
  const auto start = Clock::now();
  std::ifstream in(nl2sql::testing::fixture_dir() / "scoring_corpus.sql");
  std::vector<std::string> queries;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') queries.push_back(line);
  }
  Checks c;
  c.expect(queries.size() >= 50, "corpus has only " + std::to_string(queries.size()) + " queries");
  for (const auto& q : queries) {
    const double lib = score_query(sql::clause_inventory(sql::parse_sql(q)));
    const double oracle = nl2sql::testing::oracle_score(q);
    c.expect(lib == oracle, "score " + format_number(lib) + " != oracle " + format_number(oracle) + ": " + q);
  }
  const double took = seconds_since(start);
  c.expect(took < 1.0, "took " + fmt_seconds(took));
  return c.finish(std::to_string(queries.size()) + " queries exact, " + fmt_seconds(took));
}

// ---- 2 -----------------------------------------------------------------------

Outcome spider_bucket_medians() {
  const char* root = std::getenv("SPIDER_ROOT");
  if (!root || !*root) return skip("SPIDER_ROOT not set (needs the Spider download)");
  fs::path train = fs::path(root) / "train_spider.json";
  if (!fs::exists(train)) return fail(train.string() + " not found");
  const auto start = Clock::now();
  const auto corpus = score_corpus(load_examples(train));
  const double took = seconds_since(start);
  Checks c;
  const double expect[3] = {0, 2, 4};
  std::string medians;
  for (auto b : kAllBuckets) {
    const double m = corpus.summary.at(b).median;
    medians += (medians.empty() ? "" : " / ") + format_number(m);
    c.expect(m == expect[static_cast<std::size_t>(b)], std::string(to_string(b)) + " median " + format_number(m));
  }
  c.expect(took < 30.0, "took " + fmt_seconds(took));
  return c.finish(std::to_string(corpus.items.size()) + " examples, medians " + medians + ", " + fmt_seconds(took));
}

// ---- 3 -----------------------------------------------------------------------

Outcome curation_arithmetic() {
  TempDir tmp;
  auto p = [&](const std::string& n) { return (tmp.path() / n).string(); };
  // E/M/H pools large enough for every target.
  auto train_pool = nl2sql::testing::synthetic_pool({1000, 3200, 2600}, "train");
  auto dev_pool = nl2sql::testing::synthetic_pool({200, 400, 300}, "dev");
  // Plant verbatim copies of training pairs in the dev pool; they must not leak.
  for (std::size_t i = 0; i < 60; ++i) {
    dev_pool[i].example.question = train_pool[i].example.question;
    dev_pool[i].example.gold_sql = train_pool[i].example.gold_sql;
  }
  auto save_pool = [&](std::vector<ScoredExample> items, const std::string& name) {
    auto ds = passthrough(std::move(items));
    ds.manifest.mode = "scored";
    save_dataset(ds, p(name));
  };
  save_pool(train_pool, "train.scored.jsonl");
  save_pool(dev_pool, "dev.scored.jsonl");

  Checks c;
  auto run_all = [&](const std::string& tag) {
    auto r = nl2sql_cli({"curate", "--in", p("train.scored.jsonl"), "--out", p(tag + "curated.jsonl"), "--total",
                         "5500", "--hard", "0.4", "--medium", "0.5", "--easy", "0.1", "--seed", "2024"});
    c.expect(r.code == 0, "curate: " + r.err);
    r = nl2sql_cli({"split", "--in", p(tag + "curated.jsonl"), "--train-out", p(tag + "train.jsonl"), "--val-out",
                    p(tag + "val.jsonl"), "--train", "5000", "--val", "500", "--seed", "2024"});
    c.expect(r.code == 0, "split: " + r.err);
    r = nl2sql_cli({"benchmark", "--in", p("dev.scored.jsonl"), "--exclude", p(tag + "curated.jsonl"), "--out",
                    p(tag + "bench.jsonl"), "--total", "600", "--seed", "2024"});
    c.expect(r.code == 0, "benchmark: " + r.err);
  };
  run_all("a.");
  run_all("b.");
  if (!c.failures.empty()) return c.finish("");

  const auto curated = load_dataset(p("a.curated.jsonl"));
  const auto train = load_dataset(p("a.train.jsonl"));
  const auto val = load_dataset(p("a.val.jsonl"));
  const auto bench = load_dataset(p("a.bench.jsonl"));
  using A = std::array<std::size_t, 3>;
  c.expect(bucket_counts(curated.items) == A{550, 2750, 2200}, "curate H/M/E " + counts_text(bucket_counts(curated.items)));
  c.expect(train.items.size() == 5000 && val.items.size() == 500, "split sizes");
  // Proportional per bucket: each bucket splits 10:1 like the whole.
  c.expect(bucket_counts(val.items) == A{50, 250, 200}, "val H/M/E " + counts_text(bucket_counts(val.items)));
  c.expect(bucket_counts(train.items) == A{500, 2500, 2000}, "train H/M/E " + counts_text(bucket_counts(train.items)));
  c.expect(bucket_counts(bench.items) == A{60, 300, 240}, "benchmark H/M/E " + counts_text(bucket_counts(bench.items)));

  std::set<std::pair<std::string, std::size_t>> train_ids;
  std::set<std::pair<std::string, std::string>> train_pairs;
  for (const auto& it : curated.items) {
    train_ids.insert(item_identity(it.example));
    train_pairs.insert({it.example.question, it.example.gold_sql});
  }
  std::size_t overlap = 0;
  for (const auto& it : bench.items) {
    overlap += train_ids.contains(item_identity(it.example)) ||
               train_pairs.contains({it.example.question, it.example.gold_sql});
  }
  c.expect(overlap == 0, std::to_string(overlap) + " benchmark items overlap the training set");

  std::size_t split_overlap = 0;
  std::set<std::pair<std::string, std::size_t>> val_ids;
  for (const auto& it : val.items) val_ids.insert(item_identity(it.example));
  for (const auto& it : train.items) split_overlap += val_ids.contains(item_identity(it.example));
  c.expect(split_overlap == 0, "train/val overlap");

  for (const char* f : {"curated.jsonl", "train.jsonl", "val.jsonl", "bench.jsonl", "curated.jsonl.manifest.json",
                        "bench.jsonl.manifest.json"}) {
    c.expect(read_file(p(std::string("a.") + f)) == read_file(p(std::string("b.") + f)),
             std::string(f) + " differs between identical runs");
  }
  return c.finish("curate 2200/2750/550, split 5000/500 (val 200/250/50), benchmark 240/300/60, " +
                  std::to_string(bench.manifest.excluded) + " leaking pool items excluded, reruns byte-identical");
}

// ---- 4 -----------------------------------------------------------------------

std::map<std::string, std::string> database_digests(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root / "database")) {
    if (e.path().extension() == ".sqlite") out[e.path().string()] = sha256_file(e.path());
  }
  return out;
}

Outcome gold_self_consistency() {
  TempDir tmp;
  const auto root = nl2sql::testing::materialize_spider(tmp.path());
  const auto before = database_digests(root);
  Checks c;
  std::size_t items = 0, correct = 0;
  // Keys are db_id/source_index, so each split is its own benchmark.
  for (const char* split : {"train", "dev"}) {
    const auto bench = passthrough(score_corpus(load_examples(root / (std::string(split) + ".json"))).items);
    PredictionSet preds;
    for (const auto& it : bench.items) {
      preds.push_back({prediction_key(it.example), "```sql\n" + it.example.gold_sql + "\n```", 0, 0, std::nullopt});
    }
    EvaluationSettings s;
    s.workers = 2;
    const auto report = evaluate(preds, bench, root, s);
    items += bench.items.size();
    correct += report.count(Verdict::Correct);
    c.expect(report.count(Verdict::Correct) == bench.items.size(),
             std::string(split) + ": " + std::to_string(report.count(Verdict::Correct)) + "/" +
                 std::to_string(bench.items.size()) + " CORRECT");
  }
  c.expect(items >= 30, "only " + std::to_string(items) + " items");
  c.expect(database_digests(root) == before, "a database file digest changed");
  return c.finish(std::to_string(correct) + "/" + std::to_string(items) + " CORRECT across train and dev, " +
                  std::to_string(before.size()) + " database digests unchanged");
}

// ---- 5 -----------------------------------------------------------------------

Outcome comparator_properties() {
  const auto start = Clock::now();
  constexpr int kCases = 1000;
  using namespace nl2sql::testing;
  const std::pair<const char*, PropertyResult> results[] = {
      {"permutation invariance", permutation_invariance(kCases, 101)},
      {"order sensitivity", order_sensitivity(kCases, 102)},
      {"duplicate sensitivity", duplicate_sensitivity(kCases, 103)},
      {"relative tolerance 1e-6", relative_tolerance(kCases, 104)},
      {"tolerant bag matching", tolerant_bag_matching(kCases, 105)},
  };
  Checks c;
  int total = 0;
  for (const auto& [name, r] : results) {
    total += r.cases;
    c.expect(r.cases >= kCases && r.ok(), std::string(name) + ": " + std::to_string(r.failures) + " failures, " +
                                              r.first_failure);
  }
  const double took = seconds_since(start);
  c.expect(took < 60.0, "took " + fmt_seconds(took));
  return c.finish(std::to_string(std::size(results)) + " properties x " + std::to_string(kCases) + " cases (" +
                  std::to_string(total) + " total), " + fmt_seconds(took));
}

// ---- 6 -----------------------------------------------------------------------

// 600 items on one fixture database; each gold returns a distinct count.
struct ArithmeticFixture {
  TempDir tmp;
  fs::path root;
  CuratedDataset bench;

  ArithmeticFixture() : root(nl2sql::testing::materialize_spider(tmp.path() / "spider")) {
    std::vector<ScoredExample> items;
    for (std::size_t i = 0; i < 600; ++i) {
      NlSqlExample ex{"How many students are older than " + std::to_string(i) + "?",
                      "SELECT count(*) FROM Student WHERE Age > " + std::to_string(i % 40), "pets_1", i, "dev"};
      items.push_back(score_example(ex));
    }
    bench = passthrough(std::move(items));
    save_dataset(bench, tmp.path() / "bench.jsonl");
  }

  // kinds[i]: 'c' correct, 'm' mismatch, 'x' extraction failure, 'e' execution failure.
  fs::path predictions(const std::string& name, const std::function<char(std::size_t)>& kind) const {
    PredictionSet preds;
    for (std::size_t i = 0; i < bench.items.size(); ++i) {
      const auto& ex = bench.items[i].example;
      std::string raw;
      switch (kind(i)) {
        case 'c': raw = "```sql\n" + ex.gold_sql + "\n```"; break;
        case 'm': raw = "```sql\nSELECT count(*) + 1000 FROM Student\n```"; break;
        case 'x': raw = "```text\nI am not sure how to answer that.\n```"; break;
        default: raw = "```sql\nSELECT count(*) FROM NoSuchTable\n```"; break;
      }
      preds.push_back({prediction_key(ex), raw, 0, 0, std::nullopt});
    }
    const auto path = tmp.path() / name;
    save_predictions(preds, path);
    return path;
  }
};

Outcome accuracy_arithmetic() {
  ArithmeticFixture f;
  const auto p327 = f.predictions("p327.jsonl", [](std::size_t i) { return i < 327 ? 'c' : 'm'; });
  const auto p223 = f.predictions("p223.jsonl", [](std::size_t i) {
    if (i < 150) return 'x';
    if (i < 223) return 'e';
    return i < 400 ? 'c' : 'm';
  });
  Checks c;
  for (const auto& [name, preds] : {std::pair{"r327", p327}, std::pair{"r223", p223}}) {
    const auto r = nl2sql_cli({"evaluate", "--predictions", preds.string(), "--benchmark",
                               (f.tmp.path() / "bench.jsonl").string(), "--db-root", f.root.string(), "--out",
                               (f.tmp.path() / (std::string(name) + ".json")).string()});
    c.expect(r.code == 0, std::string("evaluate ") + name + ": " + r.err);
  }
  write_file_atomic(f.tmp.path() / "ledger.json",
                    R"({"runs":[{"name":"A","model":"synthetic","method":"fixture","dataset":"pets_1","report":"r327.json"},)"
                    R"({"name":"B","model":"synthetic","method":"fixture","dataset":"pets_1","report":"r223.json"}]})");
  const auto rep = nl2sql_cli({"report", "--ledger", (f.tmp.path() / "ledger.json").string(), "--out",
                               (f.tmp.path() / "table.md").string()});
  c.expect(rep.code == 0, "report: " + rep.err);
  if (!c.failures.empty()) return c.finish("");

  const auto r327 = load_report(f.tmp.path() / "r327.json");
  const auto r223 = load_report(f.tmp.path() / "r223.json");
  c.expect(r327.overall.accuracy_percent() == "54.50", "327/600 reported " + r327.overall.accuracy_percent());
  c.expect(r223.failure_count() == 223, "failure count " + std::to_string(r223.failure_count()));
  const auto table = read_file(f.tmp.path() / "table.md");
  c.expect(table.find("| 54.50%   |") != std::string::npos, "comparison table lacks 54.50%");
  c.expect(table.find("| 223      |") != std::string::npos, "comparison table lacks failure count 223");
  return c.finish("327/600 -> " + r327.overall.accuracy_percent() + "%, failures " +
                  std::to_string(r223.failure_count()) + " (" + std::to_string(r223.count(Verdict::ExtractionFailed)) +
                  " extraction + " + std::to_string(r223.count(Verdict::ExecutionFailed)) + " execution)");
}

// ---- 7 -----------------------------------------------------------------------

Outcome cot_round_trip() {
  TempDir tmp;
  const auto root = nl2sql::testing::materialize_spider(tmp.path() / "spider");
  const auto j = nlohmann::json::parse(read_file(nl2sql::testing::fixture_dir() / "reference_cot_record.json"));
  CotRecord reference;
  for (const auto& m : j["messages"]) reference.messages.push_back({m["role"], m["content"]});

  const auto examples = load_examples(root / "train.json");
  const auto& example = examples.at(0);
  const auto db_file = database_path(root, example.db_id);
  const auto catalog = load_schemas(root / "tables.json");
  const auto schema =
      overlay_declared_types(catalog.at(example.db_id), read_schema_from_database(example.db_id, db_file));
  const auto description = describe_schema(schema);
  const auto [reasoning, sql] = split_teacher_output(reference.messages[2].content);

  Checks c;
  const auto rebuilt = assemble_cot_record(example, description, reasoning, sql);
  c.expect(rebuilt == reference, "re-assembled record differs from the reference record");
  export_records({rebuilt}, tmp.path() / "cot.jsonl");
  const auto back = import_records(tmp.path() / "cot.jsonl");
  c.expect(back.size() == 1 && back[0] == rebuilt, "re-imported record is not field-equal");
  const auto v = validate_cot_record(back.at(0), example, db_file);
  c.expect(v.structural_ok, "structural_ok=false");
  c.expect(v.execution_match == true, "execution_match is not true: " + v.detail);
  return c.finish("record field-equal after export/import; structural_ok=true, execution_match=true, steps " +
                  v.step_coverage.taxonomy);
}

// ---- 8 -----------------------------------------------------------------------

std::vector<BatchItem> stub_items(std::size_t n) {
  std::vector<BatchItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back({"db/" + std::to_string(i),
                     {{"system", "s"}, {"user", "DATABASE SCHEMA:\nTable: t\n\nQuestion: q" + std::to_string(i)}}});
  }
  return items;
}

Outcome gateway_resilience() {
  using nl2sql::testing::StubReply;
  using nl2sql::testing::StubRequest;
  using nl2sql::testing::StubServer;
  TempDir tmp;
  Checks c;
  auto config = [](const StubServer& s, std::size_t bound) {
    EndpointConfig e;
    e.base_url = s.base_url();
    e.model = "stub";
    e.max_concurrent = bound;
    e.backoff_base_seconds = 0.01;
    e.timeout_seconds = 5;
    return e;
  };
  auto ok_reply = [](int delay) {
    return [delay](const StubRequest& r, std::size_t) { return StubReply{200, "```sql\nSELECT '" + r.question + "'\n```", delay}; };
  };

  std::size_t peak = 0;
  {
    StubServer s(ok_reply(40));
    run_batch(stub_items(16), config(s, 3), tmp.path() / "bound.jsonl");
    peak = s.max_in_flight();
    c.expect(peak <= 3, "peak in-flight " + std::to_string(peak) + " > 3");
    c.expect(s.request_count() == 16, "bound run sent " + std::to_string(s.request_count()) + " requests");
  }
  int retries = -1;
  {
    StubServer s([](const StubRequest&, std::size_t call) {
      return call < 2 ? StubReply{429, "", 0} : StubReply{200, "```sql\nSELECT 1\n```", 0};
    });
    const auto r = run_batch(stub_items(1), config(s, 1), tmp.path() / "retry.jsonl");
    retries = r.predictions.at(0).retries;
    c.expect(retries == 2, "retry_count " + std::to_string(retries));
    c.expect(s.request_count() == 3, "429-429-200 took " + std::to_string(s.request_count()) + " requests");
  }
  std::size_t first = 0, second = 0;
  {
    const auto items = stub_items(12);
    const auto out = tmp.path() / "resume.jsonl";
    std::set<std::string> seen;
    {
      StubServer s(ok_reply(5));
      std::stop_source stop;
      BatchOptions opts;
      opts.on_progress = [&](std::size_t done, std::size_t) {
        if (done >= 5) stop.request_stop();
      };
      const auto r = run_batch(items, config(s, 1), out, stop.get_token(), opts);
      c.expect(r.cancelled, "first run was not interrupted");
      for (const auto& [q, n] : s.questions()) seen.insert(q);
      first = s.request_count();
    }
    StubServer s(ok_reply(0));
    const auto r = run_batch(items, config(s, 2), out);
    second = s.request_count();
    c.expect(!r.cancelled && r.predictions.size() == items.size(), "resumed run incomplete");
    c.expect(first + second == items.size(), "requests " + std::to_string(first) + "+" + std::to_string(second));
    for (const auto& [q, n] : s.questions()) {
      c.expect(n == 1 && !seen.contains(q), "resume re-requested " + q);
    }
  }
  return c.finish("peak in-flight " + std::to_string(peak) + "/3, 429x2 then 200 -> retry_count=" +
                  std::to_string(retries) + ", resume sent " + std::to_string(second) + " of 12 after " +
                  std::to_string(first) + " completed");
}

// ---- 9 -----------------------------------------------------------------------

Outcome end_to_end_smoke() {
  const auto start = Clock::now();
  TempDir tmp;
  const auto root = nl2sql::testing::materialize_spider(tmp.path() / "spider");
  auto p = [&](const std::string& n) { return (tmp.path() / n).string(); };
  Checks c;
  auto step = [&](const std::string& name, const std::vector<std::string>& args) {
    const auto r = nl2sql_cli(args);
    c.expect(r.code == 0, name + " exited " + std::to_string(r.code) + ": " + r.err);
    return r;
  };

  step("score", {"score", "--in", (root / "train.json").string(), "--out", p("scored.jsonl")});
  step("curate", {"curate", "--in", p("scored.jsonl"), "--out", p("curated.jsonl"), "--total", "30", "--seed", "9"});
  step("describe", {"describe", "--tables", (root / "tables.json").string(), "--db-root", root.string(), "--out",
                    p("schemas.json")});
  if (!c.failures.empty()) return c.finish("");

  std::map<std::string, std::string> gold;
  for (const auto& it : load_dataset(p("curated.jsonl")).items) gold[it.example.question] = it.example.gold_sql;
  nl2sql::testing::StubServer stub(nl2sql::testing::echo_gold(gold));
  step("infer", {"infer", "--in", p("curated.jsonl"), "--out", p("pred.jsonl"), "--tables",
                 (root / "tables.json").string(), "--db-root", root.string(), "--base-url", stub.base_url(), "--model",
                 "stub-echo", "--max-concurrent", "4"});
  step("evaluate", {"evaluate", "--predictions", p("pred.jsonl"), "--benchmark", p("curated.jsonl"), "--db-root",
                    root.string(), "--out", p("report.json"), "--summary", p("report.md")});
  write_file_atomic(p("ledger.json"),
                    R"({"runs":[{"name":"smoke","model":"stub-echo","method":"gold echo","dataset":"fixture-30","report":"report.json"}]})");
  step("report", {"report", "--ledger", p("ledger.json"), "--out", p("comparison.md"), "--series-dir", p("series")});
  if (!c.failures.empty()) return c.finish("");

  const auto report = load_report(p("report.json"));
  const auto table = read_file(p("comparison.md"));
  c.expect(report.outcomes.size() == 30, std::to_string(report.outcomes.size()) + " outcomes");
  c.expect(report.overall.accuracy_percent() == "100.00", "accuracy " + report.overall.accuracy_percent());
  c.expect(stub.request_count() == 30, std::to_string(stub.request_count()) + " endpoint requests");
  c.expect(table.rfind("| Exp ID | Model ", 0) == 0 && table.find("| Exec Acc | Hard ") != std::string::npos &&
               table.find("| 100.00%  |") != std::string::npos,
           "comparison table does not have the expected columns:\n" + table);
  const double took = seconds_since(start);
  c.expect(took < 120.0, "took " + fmt_seconds(took));
  return c.finish("30 items, accuracy " + report.overall.accuracy_percent() + "%, comparison table written, " +
                  fmt_seconds(took));
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"scorer-oracle equivalence", scorer_oracle_equivalence},
      {"Spider train bucket medians", spider_bucket_medians},
      {"curation arithmetic", curation_arithmetic},
      {"evaluator gold self-consistency", gold_self_consistency},
      {"comparator properties", comparator_properties},
      {"accuracy arithmetic", accuracy_arithmetic},
      {"CoT round-trip", cot_round_trip},
      {"gateway resilience", gateway_resilience},
      {"end-to-end smoke", end_to_end_smoke},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const Error& e) {
      o = fail(e.kind() + ": " + e.what());
    } catch (const std::exception& e) {
      o = fail(e.what());
    }
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Skip ? "SKIP" : "FAIL";
    failed += o.status == Status::Fail;
    std::cout << tag << " " << n << " " << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
