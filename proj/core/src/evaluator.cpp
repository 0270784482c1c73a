#include "nl2sql/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "json.hpp"
#include "nl2sql/corpus.hpp"
#include "nl2sql/dataset_io.hpp"
#include "nl2sql/digest.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/text_format.hpp"

namespace nl2sql {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kFence = "```";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct Fence {
  std::string tag;  // lower-case, empty when untagged
  std::string_view body;
};

bool is_sql_tag(std::string_view tag) { return tag == "sql" || tag == "sqlite"; }

std::vector<Fence> find_fences(std::string_view text) {
  std::vector<Fence> fences;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find(kFence, pos);
    if (open == std::string_view::npos) break;
    std::size_t start = open + kFence.size();
    std::size_t word_end = start;
    while (word_end < text.size() && (std::isalnum(static_cast<unsigned char>(text[word_end])) ||
                                      text[word_end] == '_' || text[word_end] == '-' || text[word_end] == '+')) {
      ++word_end;
    }
    std::string tag = lower(text.substr(start, word_end - start));
    // A word counts as the info string when it ends the line, or when it is a
    // SQL tag followed by inline content ("```sql SELECT 1```").
    const bool ends_line = word_end >= text.size() || text[word_end] == '\n' || text[word_end] == '\r';
    if (!tag.empty() && (ends_line || is_sql_tag(tag))) {
      start = word_end;
    } else {
      tag.clear();
    }
    const auto close = text.find(kFence, start);
    const std::size_t end = close == std::string_view::npos ? text.size() : close;
    fences.push_back({std::move(tag), text.substr(start, end - start)});
    if (close == std::string_view::npos) break;
    pos = close + kFence.size();
  }
  return fences;
}

std::string outcome_detail(const db::QueryResult& r) { return r.message; }

}  // namespace

std::string extract_sql(std::string_view raw_output) {
  const auto fences = find_fences(raw_output);
  for (auto it = fences.rbegin(); it != fences.rend(); ++it) {
    if (is_sql_tag(it->tag)) return std::string(trim(it->body));
  }
  for (auto it = fences.rbegin(); it != fences.rend(); ++it) {
    if (it->tag.empty()) return std::string(trim(it->body));
  }
  if (!fences.empty()) return {};  // only fences in other languages
  return std::string(trim(raw_output));
}

db::QueryResult execute_query(const std::filesystem::path& db_file, std::string_view sql,
                              std::chrono::milliseconds timeout) {
  const auto conn = db::Connection::open_read_only(db_file);
  return conn.run_select(sql, timeout);
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Correct: return "CORRECT";
    case Verdict::ResultMismatch: return "RESULT_MISMATCH";
    case Verdict::ExecutionFailed: return "EXECUTION_FAILED";
    case Verdict::GoldFailed: return "GOLD_FAILED";
    case Verdict::Timeout: return "TIMEOUT";
    case Verdict::ExtractionFailed: return "EXTRACTION_FAILED";
  }
  return "UNKNOWN";
}

Verdict parse_verdict(std::string_view text) {
  for (Verdict v : kAllVerdicts) {
    if (to_string(v) == text) return v;
  }
  throw FormatError("verdict", -1, "unknown verdict \"" + std::string(text) + "\"");
}

std::string AccuracyTally::accuracy_percent() const { return format_percent(correct, judged()); }

std::size_t EvaluationReport::failure_count() const {
  return count(Verdict::ExecutionFailed) + count(Verdict::ExtractionFailed) + count(Verdict::Timeout);
}

void tally_outcomes(EvaluationReport& report) {
  report.overall = {};
  report.buckets = {};
  report.verdict_counts = {};
  for (const auto& o : report.outcomes) {
    auto& b = report.buckets[static_cast<std::size_t>(o.bucket)];
    ++report.verdict_counts[static_cast<std::size_t>(o.verdict)];
    for (AccuracyTally* t : {&report.overall, &b}) {
      ++t->total;
      if (o.verdict == Verdict::Correct) ++t->correct;
      if (o.verdict == Verdict::GoldFailed) ++t->gold_failed;
    }
  }
}

namespace {

// One worker's read-only connections, opened lazily per database file.
class ConnectionCache {
 public:
  const db::Connection& get(const std::filesystem::path& path) {
    auto it = cache_.find(path.string());
    if (it == cache_.end()) it = cache_.emplace(path.string(), db::Connection::open_read_only(path)).first;
    return it->second;
  }

 private:
  std::map<std::string, db::Connection> cache_;
};

EvaluationOutcome judge(const ScoredExample& item, const Prediction& prediction, const std::filesystem::path& db_file,
                        const EvaluationSettings& settings, ConnectionCache& connections) {
  EvaluationOutcome out;
  out.key = prediction.key;
  out.bucket = item.bucket;

  const std::string sql = extract_sql(prediction.raw_output);
  if (sql.empty()) {
    out.verdict = Verdict::ExtractionFailed;
    out.detail = prediction.error ? "no output: " + *prediction.error : "no SQL found in model output";
    return out;
  }
  const auto& conn = connections.get(db_file);
  const auto gold = conn.run_select(item.example.gold_sql, settings.timeout);
  if (gold.status != db::QueryStatus::Ok) {
    out.verdict = Verdict::GoldFailed;
    out.detail = "gold query failed: " + outcome_detail(gold);
    return out;
  }
  const auto pred = conn.run_select(sql, settings.timeout);
  switch (pred.status) {
    case db::QueryStatus::Ok: break;
    case db::QueryStatus::Timeout:
      out.verdict = Verdict::Timeout;
      out.detail = outcome_detail(pred);
      return out;
    case db::QueryStatus::WriteAttempt:
      out.verdict = Verdict::ExecutionFailed;
      out.detail = "WriteAttempt: " + outcome_detail(pred);
      return out;
    case db::QueryStatus::ExecError:
      out.verdict = Verdict::ExecutionFailed;
      out.detail = outcome_detail(pred);
      return out;
  }
  const bool ordered = has_top_level_order_by(item.example.gold_sql);
  if (compare_results(gold.table, pred.table, ordered, settings.compare)) {
    out.verdict = Verdict::Correct;
  } else {
    out.verdict = Verdict::ResultMismatch;
    out.detail = "gold " + std::to_string(gold.table.rows.size()) + " rows x " +
                 std::to_string(gold.table.columns.size()) + " cols, predicted " +
                 std::to_string(pred.table.rows.size()) + " rows x " + std::to_string(pred.table.columns.size()) +
                 " cols";
  }
  return out;
}

}  // namespace

EvaluationReport evaluate(const PredictionSet& predictions, const CuratedDataset& benchmark,
                          const std::filesystem::path& db_root, const EvaluationSettings& settings) {
  std::map<std::string, const Prediction*> by_key;
  for (const auto& p : predictions) by_key[p.key] = &p;

  const std::size_t n = benchmark.items.size();
  std::vector<const Prediction*> matched(n, nullptr);
  std::set<std::string> keys;
  std::size_t missing = 0;
  std::string first_missing;
  for (std::size_t i = 0; i < n; ++i) {
    const auto key = prediction_key(benchmark.items[i].example);
    if (!keys.insert(key).second) throw InvalidArgument("DuplicateKey", "benchmark key " + key + " is not unique");
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      if (missing++ == 0) first_missing = key;
      continue;
    }
    matched[i] = it->second;
  }
  if (missing) {
    throw InvalidArgument("IncompletePredictions", std::to_string(missing) + " of " + std::to_string(n) +
                                                       " benchmark items have no prediction (first: " +
                                                       first_missing + ")");
  }

  std::vector<std::filesystem::path> db_files(n);
  for (std::size_t i = 0; i < n; ++i) {
    db_files[i] = database_path(db_root, benchmark.items[i].example.db_id);
    if (!std::filesystem::exists(db_files[i])) {
      throw InvalidArgument("MissingDatabase", "database " + benchmark.items[i].example.db_id + " not found at " +
                                                   db_files[i].string());
    }
  }

  EvaluationReport report;
  report.outcomes.resize(n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::string> first_error;
  auto worker = [&] {
    ConnectionCache connections;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        report.outcomes[i] = judge(benchmark.items[i], *matched[i], db_files[i], settings, connections);
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::string(e.what());
        report.outcomes[i] = {matched[i]->key, Verdict::GoldFailed, e.what(), benchmark.items[i].bucket};
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(settings.workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) throw DatabaseUnreadable("<db_root>", *first_error);

  tally_outcomes(report);
  report.dataset_digest = sha256_hex(items_to_jsonl(benchmark.items));
  std::string joined;
  for (const auto* p : matched) joined += prediction_to_json_line(*p);
  report.predictions_digest = sha256_hex(joined);
  report.compare = settings.compare;
  report.timeout_ms = settings.timeout.count();
  return report;
}

std::string report_to_json(const EvaluationReport& r) {
  ojson j;
  ojson summary;
  summary["total"] = r.overall.total;
  summary["judged"] = r.overall.judged();
  summary["correct"] = r.overall.correct;
  summary["gold_failed"] = r.overall.gold_failed;
  summary["accuracy_percent"] = r.overall.accuracy_percent();
  summary["failure_count"] = r.failure_count();
  ojson verdicts;
  for (Verdict v : kAllVerdicts) verdicts[std::string(to_string(v))] = r.count(v);
  summary["verdicts"] = verdicts;
  ojson buckets;
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    const auto& t = r.buckets[static_cast<std::size_t>(b)];
    buckets[std::string(to_string(b))] = {{"total", t.total},
                                          {"judged", t.judged()},
                                          {"correct", t.correct},
                                          {"gold_failed", t.gold_failed},
                                          {"accuracy_percent", t.accuracy_percent()}};
  }
  summary["buckets"] = buckets;
  j["summary"] = summary;

  ojson meta;
  meta["dataset_digest"] = r.dataset_digest;
  meta["predictions_digest"] = r.predictions_digest;
  meta["timeout_ms"] = r.timeout_ms;
  meta["compare"] = {{"respect_gold_order", r.compare.respect_gold_order},
                     {"duplicates_significant", r.compare.duplicates_significant},
                     {"match_column_names", r.compare.match_column_names},
                     {"relative_tolerance", r.compare.relative_tolerance},
                     {"absolute_tolerance", r.compare.absolute_tolerance}};
  j["metadata"] = meta;

  ojson outcomes = ojson::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back(
        {{"key", o.key}, {"verdict", to_string(o.verdict)}, {"bucket", to_string(o.bucket)}, {"detail", o.detail}});
  }
  j["outcomes"] = outcomes;
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text, const std::string& source) {
  EvaluationReport r;
  try {
    const ojson j = ojson::parse(text);
    for (const auto& o : j.at("outcomes")) {
      r.outcomes.push_back({o.at("key").get<std::string>(), parse_verdict(o.at("verdict").get<std::string>()),
                            o.value("detail", std::string{}), parse_bucket(o.at("bucket").get<std::string>())});
    }
    const auto& meta = j.at("metadata");
    r.dataset_digest = meta.value("dataset_digest", std::string{});
    r.predictions_digest = meta.value("predictions_digest", std::string{});
    r.timeout_ms = meta.value("timeout_ms", std::int64_t{30'000});
    if (meta.contains("compare")) {
      const auto& c = meta["compare"];
      r.compare.respect_gold_order = c.value("respect_gold_order", true);
      r.compare.duplicates_significant = c.value("duplicates_significant", true);
      r.compare.match_column_names = c.value("match_column_names", false);
      r.compare.relative_tolerance = c.value("relative_tolerance", 1e-6);
      r.compare.absolute_tolerance = c.value("absolute_tolerance", 1e-9);
    }
  } catch (const ojson::exception& e) {
    throw FormatError(source, -1, std::string("invalid evaluation report: ") + e.what());
  }
  tally_outcomes(r);
  return r;
}

EvaluationReport load_report(const std::filesystem::path& path) {
  return report_from_json(read_file(path), path.string());
}

std::string render_report_summary(const EvaluationReport& r) {
  std::string out = "Execution accuracy: " + r.overall.accuracy_percent() + "% (" + std::to_string(r.overall.correct) +
                    "/" + std::to_string(r.overall.judged()) + " judged, " + std::to_string(r.overall.gold_failed) +
                    " gold failures excluded)\n";
  out += "Failures (execution, extraction, timeout): " + std::to_string(r.failure_count()) + "\n\n";
  std::vector<std::vector<std::string>> rows;
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    const auto& t = r.buckets[static_cast<std::size_t>(b)];
    rows.push_back({std::string(to_string(b)), std::to_string(t.total), std::to_string(t.judged()),
                    std::to_string(t.correct), t.accuracy_percent() + "%"});
  }
  out += markdown_table({"Difficulty", "Items", "Judged", "Correct", "Accuracy"}, rows);
  out += "\n";
  rows.clear();
  for (Verdict v : kAllVerdicts) rows.push_back({std::string(to_string(v)), std::to_string(r.count(v))});
  out += markdown_table({"Verdict", "Count"}, rows);
  return out;
}

}  // namespace nl2sql
