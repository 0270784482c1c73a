#include "nl2sql/report.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/text_format.hpp"

namespace nl2sql {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<DifficultyBucket, 3> kReportBuckets = {DifficultyBucket::Hard, DifficultyBucket::Medium,
                                                            DifficultyBucket::Easy};

std::string bucket_percent(const EvaluationReport& r, DifficultyBucket b) {
  return r.buckets[static_cast<std::size_t>(b)].accuracy_percent() + "%";
}

std::string sanitize(std::string_view group) {
  std::string out;
  for (char c : group) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  }
  return out.empty() ? "default" : out;
}

}  // namespace

RunLedger parse_ledger(std::string_view json_text, const std::string& source, const std::filesystem::path& base_dir) {
  RunLedger ledger;
  std::set<std::string> names;
  try {
    const ojson j = ojson::parse(json_text);
    const auto& runs = j.at("runs");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      LedgerRun run;
      run.name = r.at("name").get<std::string>();
      run.model = r.value("model", std::string{});
      run.method = r.value("method", std::string{});
      run.dataset = r.value("dataset", std::string{});
      run.group = r.value("group", std::string{});
      std::filesystem::path report = r.at("report").get<std::string>();
      run.report = report.is_absolute() ? report : base_dir / report;
      if (!names.insert(run.name).second) {
        throw FormatError(source, static_cast<std::ptrdiff_t>(i), "duplicate run name \"" + run.name + "\"");
      }
      ledger.runs.push_back(std::move(run));
    }
  } catch (const ojson::exception& e) {
    throw FormatError(source, -1, std::string("invalid ledger: ") + e.what());
  }
  return ledger;
}

RunLedger load_ledger(const std::filesystem::path& path) {
  return parse_ledger(read_file(path), path.string(), path.parent_path());
}

TableFormat parse_table_format(std::string_view text) {
  if (text == "markdown" || text == "md") return TableFormat::Markdown;
  if (text == "csv") return TableFormat::Csv;
  throw InvalidArgument("ConfigError", "unknown format \"" + std::string(text) + "\" (expected markdown or csv)");
}

std::map<std::string, EvaluationReport> load_ledger_reports(const RunLedger& ledger) {
  std::map<std::string, EvaluationReport> reports;
  for (const auto& run : ledger.runs) {
    if (!std::filesystem::exists(run.report)) {
      throw InvalidArgument("MissingReport", "run " + run.name + ": report " + run.report.string() + " not found");
    }
    reports.emplace(run.name, load_report(run.report));
  }
  return reports;
}

std::string render_comparison(const RunLedger& ledger, const std::map<std::string, EvaluationReport>& reports,
                              TableFormat format) {
  const std::vector<std::string> header = {"Exp ID", "Model", "Training Method", "Dataset", "Exec Acc",
                                           "Hard",   "Medium", "Easy",           "Failures"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& run : ledger.runs) {
    auto it = reports.find(run.name);
    if (it == reports.end()) throw InvalidArgument("MissingReport", "run " + run.name + " has no loaded report");
    const auto& r = it->second;
    std::vector<std::string> row = {run.name, run.model, run.method, run.dataset, r.overall.accuracy_percent() + "%"};
    for (DifficultyBucket b : kReportBuckets) row.push_back(bucket_percent(r, b));
    row.push_back(std::to_string(r.failure_count()));
    rows.push_back(std::move(row));
  }
  if (format == TableFormat::Markdown) return markdown_table(header, rows);
  std::string out = csv_row(header);
  for (const auto& row : rows) out += csv_row(row);
  return out;
}

std::map<std::string, std::string> render_figure_series(const RunLedger& ledger,
                                                        const std::map<std::string, EvaluationReport>& reports) {
  std::map<std::string, std::string> files;
  std::vector<std::string> group_order;
  std::map<std::string, std::string> series;
  std::string errors = csv_row({"run", "model", "CORRECT", "RESULT_MISMATCH", "EXECUTION_FAILED", "GOLD_FAILED",
                                "TIMEOUT", "EXTRACTION_FAILED", "failures"});
  for (const auto& run : ledger.runs) {
    auto it = reports.find(run.name);
    if (it == reports.end()) throw InvalidArgument("MissingReport", "run " + run.name + " has no loaded report");
    const auto& r = it->second;
    const std::string file = "series_" + sanitize(run.group) + ".csv";
    if (!series.contains(file)) {
      series[file] = csv_row({"run", "model", "method", "dataset", "accuracy", "hard", "medium", "easy"});
    }
    std::vector<std::string> row = {run.name, run.model, run.method, run.dataset, r.overall.accuracy_percent()};
    for (DifficultyBucket b : kReportBuckets) row.push_back(r.buckets[static_cast<std::size_t>(b)].accuracy_percent());
    series[file] += csv_row(row);

    std::vector<std::string> err = {run.name, run.model};
    for (Verdict v : kAllVerdicts) err.push_back(std::to_string(r.count(v)));
    err.push_back(std::to_string(r.failure_count()));
    errors += csv_row(err);
  }
  files = std::move(series);
  files["error_breakdown.csv"] = std::move(errors);
  return files;
}

}  // namespace nl2sql
