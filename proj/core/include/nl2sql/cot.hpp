#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/corpus.hpp"
#include "nl2sql/evaluator.hpp"
#include "nl2sql/example.hpp"
#include "nl2sql/prompts.hpp"

namespace nl2sql {

/// A three-message fine-tuning record: system, user, assistant.
struct CotRecord {
  std::vector<ChatMessage> messages;

  friend bool operator==(const CotRecord&, const CotRecord&) = default;
};

enum class CotStep { QueryAnalysis, TableSelection, ColumnSelection, LogicStrategy, SelfValidation };

inline constexpr std::array<CotStep, 5> kAllCotSteps = {CotStep::QueryAnalysis, CotStep::TableSelection,
                                                        CotStep::ColumnSelection, CotStep::LogicStrategy,
                                                        CotStep::SelfValidation};

std::string_view to_string(CotStep step);

struct StepCoverage {
  std::array<bool, 5> found{};  // indexed by CotStep
  /// "five-step" when all five steps are present, "four-step" when the first
  /// four are, otherwise "partial".
  std::string taxonomy;

  bool has(CotStep s) const { return found[static_cast<std::size_t>(s)]; }
};

/// Keyword and heading match over the reasoning text; informational only.
StepCoverage detect_steps(std::string_view reasoning);

enum class CotFailure {
  WrongRoleSequence,
  MissingSchemaHeader,
  MissingQuestion,
  MissingSqlFence,
  SqlSyntaxError,
  PredictionExecutionFailed,
  GoldExecutionFailed,
};

std::string_view to_string(CotFailure failure);

struct CotValidationResult {
  bool structural_ok = false;
  std::optional<std::string> extracted_sql;
  /// Present only when the structure is valid, the SQL parses and both queries ran.
  std::optional<bool> execution_match;
  StepCoverage step_coverage;
  std::optional<CotFailure> failure_reason;
  std::string detail;
  std::vector<std::string> warnings;
};

/// System (chain-of-thought instruction) and user messages for a
/// teacher model. Throws InvalidArgument(SchemaMismatch | EmptyQuestion).
std::vector<ChatMessage> build_teacher_prompt(const NlSqlExample& example, const SchemaDescription& description);

/// Assistant content = reasoning + "\n\n```sql\n" + final_sql + "\n```".
/// Throws SyntaxError when final_sql does not parse and
/// InvalidArgument(EmptyReasoning) when the reasoning is blank.
CotRecord assemble_cot_record(const NlSqlExample& example, const SchemaDescription& description,
                              std::string_view reasoning, std::string_view final_sql);

/// Splits teacher output into (reasoning, SQL of the last fence). The
/// reasoning is the text before that fence, trimmed.
std::pair<std::string, std::string> split_teacher_output(std::string_view raw_output);

/// Structure-only checks plus step detection; no database access.
CotValidationResult check_cot_structure(const CotRecord& record);

/// Structure checks, then executes the record's final SQL and the gold SQL on
/// db_file and compares the results. Throws DatabaseUnreadable.
CotValidationResult validate_cot_record(const CotRecord& record, const NlSqlExample& gold,
                                        const std::filesystem::path& db_file, const CompareSettings& compare = {},
                                        std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// {"messages":[{"role":...,"content":...},...]} on a single line.
std::string cot_record_to_json_line(const CotRecord& record);
CotRecord cot_record_from_json(std::string_view line, const std::string& source, std::ptrdiff_t index);

void export_records(const std::vector<CotRecord>& records, const std::filesystem::path& path);
std::vector<CotRecord> import_records(const std::filesystem::path& path);

}  // namespace nl2sql
