#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/evaluator.hpp"

namespace nl2sql {

/// One row of the comparison table.
struct LedgerRun {
  std::string name;    // experiment id
  std::string model;
  std::string method;  // training method label
  std::string dataset;
  std::filesystem::path report;  // EvaluationReport file, relative to the ledger
  /// Figure series this run belongs to (e.g. "large-models"); optional.
  std::string group;

  friend bool operator==(const LedgerRun&, const LedgerRun&) = default;
};

struct RunLedger {
  std::vector<LedgerRun> runs;
};

/// {"runs":[{"name","model","method","dataset","report","group"}]}. Relative
/// report paths resolve against `base_dir`. Throws FormatError on duplicate
/// run names.
RunLedger parse_ledger(std::string_view json_text, const std::string& source,
                       const std::filesystem::path& base_dir);
RunLedger load_ledger(const std::filesystem::path& path);

enum class TableFormat { Markdown, Csv };
TableFormat parse_table_format(std::string_view text);

/// Loads every referenced report. Throws InvalidArgument(MissingReport).
std::map<std::string, EvaluationReport> load_ledger_reports(const RunLedger& ledger);

/// One row per run in ledger order: Exp ID, Model, Training Method, Dataset,
/// Exec Acc, Hard, Medium, Easy, Failures. Accuracies are "NN.NN%".
std::string render_comparison(const RunLedger& ledger, const std::map<std::string, EvaluationReport>& reports,
                              TableFormat format);

/// Figure-style CSV series: name -> file contents. One
/// "series_<group>.csv" per run group (run, model, method, accuracy, bucket
/// accuracies) plus "error_breakdown.csv" (run, verdict counts).
std::map<std::string, std::string> render_figure_series(const RunLedger& ledger,
                                                        const std::map<std::string, EvaluationReport>& reports);

}  // namespace nl2sql
