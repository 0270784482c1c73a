#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/complexity.hpp"
#include "nl2sql/curator.hpp"
#include "nl2sql/prediction.hpp"
#include "nl2sql/result_table.hpp"
#include "nl2sql/sqlite_db.hpp"

namespace nl2sql {

/// Result-set comparison conventions. Each one can be switched off.
struct CompareSettings {
  /// Compare rows in order when the gold query has a top-level ORDER BY.
  bool respect_gold_order = true;
  /// Duplicate rows are significant (multiset) rather than collapsed (set).
  bool duplicates_significant = true;
  /// Column names must match (case-insensitively) in addition to arity.
  bool match_column_names = false;
  double relative_tolerance = 1e-6;
  double absolute_tolerance = 1e-9;

  friend bool operator==(const CompareSettings&, const CompareSettings&) = default;
};

/// NULL = NULL; integers and reals compare numerically within tolerance;
/// text and blobs compare exactly; different kinds never match.
bool values_equal(const Value& a, const Value& b, const CompareSettings& settings = {});
bool rows_equal(const Row& a, const Row& b, const CompareSettings& settings = {});

bool compare_results(const ResultTable& gold, const ResultTable& pred, bool gold_has_order_by,
                     const CompareSettings& settings = {});

/// True when the statement's outermost select ends with ORDER BY. Uses the
/// parser and falls back to a depth-0 keyword scan for SQL it rejects.
bool has_top_level_order_by(std::string_view sql);

/// Contents of the last ```sql fence, else the last untagged fence, else the
/// trimmed text. May return an empty string.
std::string extract_sql(std::string_view raw_output);

/// One read-only execution against a database file.
db::QueryResult execute_query(const std::filesystem::path& db_file, std::string_view sql,
                              std::chrono::milliseconds timeout);

enum class Verdict { Correct, ResultMismatch, ExecutionFailed, GoldFailed, Timeout, ExtractionFailed };

inline constexpr std::array<Verdict, 6> kAllVerdicts = {Verdict::Correct,    Verdict::ResultMismatch,
                                                        Verdict::ExecutionFailed, Verdict::GoldFailed,
                                                        Verdict::Timeout,    Verdict::ExtractionFailed};

/// CORRECT, RESULT_MISMATCH, EXECUTION_FAILED, GOLD_FAILED, TIMEOUT, EXTRACTION_FAILED
std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view text);

struct EvaluationOutcome {
  std::string key;
  Verdict verdict = Verdict::Correct;
  std::string detail;
  DifficultyBucket bucket = DifficultyBucket::Easy;

  friend bool operator==(const EvaluationOutcome&, const EvaluationOutcome&) = default;
};

struct EvaluationSettings {
  CompareSettings compare;
  std::chrono::milliseconds timeout{30'000};
  std::size_t workers = 1;
};

struct AccuracyTally {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t gold_failed = 0;

  /// total - gold_failed
  std::size_t judged() const { return total - gold_failed; }
  /// Two-decimal percentage, e.g. "54.50".
  std::string accuracy_percent() const;

  friend bool operator==(const AccuracyTally&, const AccuracyTally&) = default;
};

struct EvaluationReport {
  std::vector<EvaluationOutcome> outcomes;  // benchmark order
  AccuracyTally overall;
  std::array<AccuracyTally, 3> buckets{};      // indexed by DifficultyBucket
  std::array<std::size_t, 6> verdict_counts{};  // indexed by Verdict
  std::string dataset_digest;
  std::string predictions_digest;
  CompareSettings compare;
  std::int64_t timeout_ms = 30'000;

  std::size_t count(Verdict v) const { return verdict_counts[static_cast<std::size_t>(v)]; }
  /// EXECUTION_FAILED + EXTRACTION_FAILED + TIMEOUT
  std::size_t failure_count() const;
};

/// Rebuilds tallies and verdict counts from the outcome list.
void tally_outcomes(EvaluationReport& report);

/// Scores every benchmark item. Throws InvalidArgument(IncompletePredictions)
/// when an item has no prediction and InvalidArgument(MissingDatabase) when a
/// database file is absent. The database files are opened read-only.
EvaluationReport evaluate(const PredictionSet& predictions, const CuratedDataset& benchmark,
                          const std::filesystem::path& db_root, const EvaluationSettings& settings = {});

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text, const std::string& source);
EvaluationReport load_report(const std::filesystem::path& path);

/// Human-readable summary: overall line plus a per-bucket and per-verdict table.
std::string render_report_summary(const EvaluationReport& report);

}  // namespace nl2sql
