#include "nl2sql/cot.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/sql/parser.hpp"

namespace nl2sql {

using ojson = nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct SqlFence {
  std::size_t open = 0;  // offset of the opening backticks
  std::string_view body;
};

// Last fence tagged sql (or sqlite); the tag must be a whole word.
std::optional<SqlFence> last_sql_fence(std::string_view text) {
  const std::string folded = lower(text);
  std::optional<SqlFence> found;
  std::size_t pos = 0;
  while (true) {
    const auto open = folded.find("```", pos);
    if (open == std::string::npos) break;
    std::size_t tag_end = open + 3;
    while (tag_end < folded.size() && std::isalnum(static_cast<unsigned char>(folded[tag_end]))) ++tag_end;
    const std::string_view tag = std::string_view(folded).substr(open + 3, tag_end - open - 3);
    const auto close = folded.find("```", tag_end);
    const std::size_t end = close == std::string::npos ? folded.size() : close;
    if (tag == "sql" || tag == "sqlite") found = SqlFence{open, text.substr(tag_end, end - tag_end)};
    if (close == std::string::npos) break;
    pos = close + 3;
  }
  return found;
}

struct StepCues {
  CotStep step;
  std::vector<std::string_view> cues;
};

const std::vector<StepCues>& step_cues() {
  static const std::vector<StepCues> cues = {
      {CotStep::QueryAnalysis,
       {"query analysis", "analyze the question", "analyse the question", "to answer the question",
        "the question asks", "user's intent", "user intent"}},
      {CotStep::TableSelection,
       {"table selection", "target table", "relevant table", "identify the table", "which table", "tables needed",
        "select the table"}},
      {CotStep::ColumnSelection,
       {"column selection", "required columns", "relevant columns", "identify the columns", "columns needed",
        "corresponds to the"}},
      {CotStep::LogicStrategy,
       {"logic strategy", "join strategy", "logic & join", "joins", "join ", "aggregation", "filtering"}},
      {CotStep::SelfValidation,
       {"self-validation", "self validation", "validate", "validation", "verify", "double-check", "double check",
        "sanity check"}},
  };
  return cues;
}

CotValidationResult fail(CotValidationResult r, CotFailure reason, std::string detail) {
  r.failure_reason = reason;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

std::string_view to_string(CotStep step) {
  switch (step) {
    case CotStep::QueryAnalysis: return "Query Analysis";
    case CotStep::TableSelection: return "Table Selection";
    case CotStep::ColumnSelection: return "Column Selection";
    case CotStep::LogicStrategy: return "Logic & Join Strategy";
    case CotStep::SelfValidation: return "Self-Validation";
  }
  return "";
}

std::string_view to_string(CotFailure failure) {
  switch (failure) {
    case CotFailure::WrongRoleSequence: return "WrongRoleSequence";
    case CotFailure::MissingSchemaHeader: return "MissingSchemaHeader";
    case CotFailure::MissingQuestion: return "MissingQuestion";
    case CotFailure::MissingSqlFence: return "MissingSqlFence";
    case CotFailure::SqlSyntaxError: return "SqlSyntaxError";
    case CotFailure::PredictionExecutionFailed: return "PredictionExecutionFailed";
    case CotFailure::GoldExecutionFailed: return "GoldExecutionFailed";
  }
  return "";
}

StepCoverage detect_steps(std::string_view reasoning) {
  const std::string folded = lower(reasoning);
  StepCoverage coverage;
  for (const auto& entry : step_cues()) {
    const bool hit = std::any_of(entry.cues.begin(), entry.cues.end(),
                                 [&](std::string_view cue) { return folded.find(cue) != std::string::npos; });
    coverage.found[static_cast<std::size_t>(entry.step)] = hit;
  }
  const bool first_four = coverage.has(CotStep::QueryAnalysis) && coverage.has(CotStep::TableSelection) &&
                          coverage.has(CotStep::ColumnSelection) && coverage.has(CotStep::LogicStrategy);
  coverage.taxonomy = first_four ? (coverage.has(CotStep::SelfValidation) ? "five-step" : "four-step") : "partial";
  return coverage;
}

std::vector<ChatMessage> build_teacher_prompt(const NlSqlExample& example, const SchemaDescription& description) {
  if (trim(example.question).empty()) {
    throw InvalidArgument("EmptyQuestion", "example " + std::to_string(example.source_index) + " has no question");
  }
  return render_inference_prompt(example, description, PromptMode::Cot, false);
}

CotRecord assemble_cot_record(const NlSqlExample& example, const SchemaDescription& description,
                              std::string_view reasoning, std::string_view final_sql) {
  if (trim(reasoning).empty()) throw InvalidArgument("EmptyReasoning", "reasoning text is empty");
  const std::string_view sql = trim(final_sql);
  sql::parse_sql(sql);
  CotRecord record;
  record.messages = build_teacher_prompt(example, description);
  std::string assistant(reasoning);
  assistant += "\n\n```sql\n";
  assistant += sql;
  assistant += "\n```";
  record.messages.push_back({"assistant", std::move(assistant)});
  return record;
}

std::pair<std::string, std::string> split_teacher_output(std::string_view raw_output) {
  const auto fence = last_sql_fence(raw_output);
  if (!fence) throw InvalidArgument("MissingSqlFence", "teacher output has no ```sql block");
  return {std::string(trim(raw_output.substr(0, fence->open))), std::string(trim(fence->body))};
}

CotValidationResult check_cot_structure(const CotRecord& record) {
  CotValidationResult r;
  const auto& m = record.messages;
  if (m.size() != 3 || m[0].role != "system" || m[1].role != "user" || m[2].role != "assistant") {
    return fail(std::move(r), CotFailure::WrongRoleSequence, "roles must be exactly system, user, assistant");
  }
  r.step_coverage = detect_steps(m[2].content);
  if (m[1].content.find("DATABASE SCHEMA:") == std::string::npos) {
    return fail(std::move(r), CotFailure::MissingSchemaHeader, "user content lacks \"DATABASE SCHEMA:\"");
  }
  if (m[1].content.find("Question:") == std::string::npos) {
    return fail(std::move(r), CotFailure::MissingQuestion, "user content lacks a \"Question:\" line");
  }
  const auto fence = last_sql_fence(m[2].content);
  if (!fence || trim(fence->body).empty()) {
    return fail(std::move(r), CotFailure::MissingSqlFence, "assistant content has no non-empty ```sql block");
  }
  r.structural_ok = true;
  r.extracted_sql = std::string(trim(fence->body));
  for (CotStep s : kAllCotSteps) {
    if (!r.step_coverage.has(s)) r.warnings.push_back("step not detected: " + std::string(to_string(s)));
  }
  return r;
}

CotValidationResult validate_cot_record(const CotRecord& record, const NlSqlExample& gold,
                                        const std::filesystem::path& db_file, const CompareSettings& compare,
                                        std::chrono::milliseconds timeout) {
  CotValidationResult r = check_cot_structure(record);
  if (!r.structural_ok) return r;
  try {
    sql::parse_sql(*r.extracted_sql);
  } catch (const Error& e) {
    return fail(std::move(r), CotFailure::SqlSyntaxError, e.what());
  }
  const auto conn = db::Connection::open_read_only(db_file);
  const auto gold_result = conn.run_select(gold.gold_sql, timeout);
  if (gold_result.status != db::QueryStatus::Ok) {
    return fail(std::move(r), CotFailure::GoldExecutionFailed, "gold query failed: " + gold_result.message);
  }
  const auto pred = conn.run_select(*r.extracted_sql, timeout);
  if (pred.status != db::QueryStatus::Ok) {
    return fail(std::move(r), CotFailure::PredictionExecutionFailed, pred.message);
  }
  r.execution_match =
      compare_results(gold_result.table, pred.table, has_top_level_order_by(gold.gold_sql), compare);
  if (gold_result.table.rows.empty() && pred.table.rows.empty()) {
    r.warnings.push_back("low-signal match: both queries returned no rows");
  }
  return r;
}

std::string cot_record_to_json_line(const CotRecord& record) {
  ojson messages = ojson::array();
  for (const auto& m : record.messages) {
    ojson msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  ojson j;
  j["messages"] = std::move(messages);
  return j.dump();
}

CotRecord cot_record_from_json(std::string_view line, const std::string& source, std::ptrdiff_t index) {
  CotRecord record;
  try {
    const ojson j = ojson::parse(line);
    for (const auto& m : j.at("messages")) {
      record.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
  } catch (const ojson::exception& e) {
    throw FormatError(source, index, std::string("invalid record: ") + e.what());
  }
  return record;
}

void export_records(const std::vector<CotRecord>& records, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : records) {
    out += cot_record_to_json_line(r);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<CotRecord> import_records(const std::filesystem::path& path) {
  std::vector<CotRecord> records;
  const auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    records.push_back(cot_record_from_json(lines[i], path.string(), static_cast<std::ptrdiff_t>(i)));
  }
  return records;
}

}  // namespace nl2sql
