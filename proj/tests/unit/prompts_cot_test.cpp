#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "json.hpp"
#include "nl2sql/cot.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/prompts.hpp"

using namespace nl2sql;
using nl2sql::testing::TempDir;

namespace {

struct Reference {
  CotRecord record;
  NlSqlExample example;
  SchemaDescription description;
  std::string reasoning;
  std::string sql;
};

Reference load_reference() {
  Reference l;
  const auto j = nlohmann::json::parse(read_file(nl2sql::testing::fixture_dir() / "reference_cot_record.json"));
  for (const auto& m : j["messages"]) l.record.messages.push_back({m["role"], m["content"]});
  const std::string& user = l.record.messages[1].content;
  const auto q = user.rfind("\n\nQuestion: ");
  l.description.db_id = "customers_and_invoices";
  l.description.text = user.substr(std::string("DATABASE SCHEMA:\n").size(), q - 17);
  l.example = {user.substr(q + 12), "SELECT account_id, date_account_opened, account_name, other_account_details FROM Accounts",
               "customers_and_invoices", 0, "train"};
  std::tie(l.reasoning, l.sql) = split_teacher_output(l.record.messages[2].content);
  return l;
}

}  // namespace

TEST(Prompts, CotModeUsesReferenceSystemPrompt) {
  const auto l = load_reference();
  EXPECT_EQ(l.record.messages[0].content, kCotSystemPrompt);
  const auto msgs = render_inference_prompt(l.example, l.description, PromptMode::Cot, false);
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[1].content, l.record.messages[1].content);
}

TEST(Prompts, DirectModeAndSelfCorrection) {
  const auto l = load_reference();
  const auto plain = render_inference_prompt(l.example, l.description, PromptMode::Direct, false);
  EXPECT_EQ(plain[0].content, kDirectSystemPrompt);
  const auto sc = render_inference_prompt(l.example, l.description, PromptMode::Direct, true);
  EXPECT_EQ(sc[0].content, std::string(kDirectSystemPrompt) + " " + std::string(kSelfCorrectionDirective));
  EXPECT_EQ(parse_prompt_mode("cot"), PromptMode::Cot);
  EXPECT_THROW(parse_prompt_mode("fancy"), InvalidArgument);
}

TEST(Prompts, SchemaMustMatchDatabase) {
  auto l = load_reference();
  l.description.db_id = "pets_1";
  try {
    render_inference_prompt(l.example, l.description, PromptMode::Direct, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "SchemaMismatch");
  }
}

TEST(Cot, AssembleReproducesReferenceRecord) {
  const auto l = load_reference();
  EXPECT_EQ(assemble_cot_record(l.example, l.description, l.reasoning, l.sql), l.record);
}

TEST(Cot, ExportImportRoundTrip) {
  TempDir tmp;
  const auto l = load_reference();
  const auto rebuilt = assemble_cot_record(l.example, l.description, l.reasoning, l.sql);
  export_records({rebuilt, rebuilt}, tmp / "cot.jsonl");
  const auto back = import_records(tmp / "cot.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], rebuilt);
  // Key order of the wire format is role, then content.
  EXPECT_EQ(cot_record_to_json_line(rebuilt).rfind("{\"messages\":[{\"role\":\"system\",\"content\":", 0), 0u);
}

TEST(Cot, ReferenceValidatesAgainstItsSchema) {
  TempDir tmp;
  const auto root = nl2sql::testing::materialize_spider(tmp.path());
  const auto l = load_reference();
  const auto r = validate_cot_record(l.record, l.example, root / "database" / "customers_and_invoices" /
                                                              "customers_and_invoices.sqlite");
  EXPECT_TRUE(r.structural_ok);
  ASSERT_TRUE(r.execution_match.has_value());
  EXPECT_TRUE(*r.execution_match);
  EXPECT_FALSE(r.failure_reason.has_value());
  EXPECT_EQ(r.step_coverage.taxonomy, "four-step");
}

TEST(Cot, StructuralFailures) {
  const auto l = load_reference();
  CotRecord two{{l.record.messages[0], l.record.messages[1]}};
  EXPECT_EQ(check_cot_structure(two).failure_reason, CotFailure::WrongRoleSequence);

  auto no_header = l.record;
  no_header.messages[1].content = "Question: x";
  EXPECT_EQ(check_cot_structure(no_header).failure_reason, CotFailure::MissingSchemaHeader);

  auto no_question = l.record;
  no_question.messages[1].content = "DATABASE SCHEMA:\nTable: t\na INTEGER";
  EXPECT_EQ(check_cot_structure(no_question).failure_reason, CotFailure::MissingQuestion);

  auto no_fence = l.record;
  no_fence.messages[2].content = "I think SELECT 1 works.";
  EXPECT_EQ(check_cot_structure(no_fence).failure_reason, CotFailure::MissingSqlFence);
}

TEST(Cot, ExecutionFailuresAreClassified) {
  TempDir tmp;
  const auto root = nl2sql::testing::materialize_spider(tmp.path());
  const auto db = root / "database" / "pets_1" / "pets_1.sqlite";
  NlSqlExample ex{"How many pets?", "SELECT count(*) FROM Pets", "pets_1", 0, "train"};
  SchemaDescription d{"pets_1", "Table: Pets\nPetID INTEGER PRIMARY KEY", false, 0, {}};

  auto bad_syntax = assemble_cot_record(ex, d, "Count the pets.", "SELECT count(*) FROM Pets");
  bad_syntax.messages[2].content = "Count.\n\n```sql\nSELECT count(* FROM Pets\n```";
  EXPECT_EQ(validate_cot_record(bad_syntax, ex, db).failure_reason, CotFailure::SqlSyntaxError);

  const auto bad_table = assemble_cot_record(ex, d, "Count the pets.", "SELECT count(*) FROM Dogs");
  EXPECT_EQ(validate_cot_record(bad_table, ex, db).failure_reason, CotFailure::PredictionExecutionFailed);

  NlSqlExample broken_gold = ex;
  broken_gold.gold_sql = "SELECT nope FROM Pets";
  const auto ok = assemble_cot_record(ex, d, "Count the pets.", "SELECT count(*) FROM Pets");
  EXPECT_EQ(validate_cot_record(ok, broken_gold, db).failure_reason, CotFailure::GoldExecutionFailed);

  const auto wrong = assemble_cot_record(ex, d, "Count the pets.", "SELECT count(*) + 1 FROM Pets");
  const auto r = validate_cot_record(wrong, ex, db);
  EXPECT_TRUE(r.structural_ok);
  EXPECT_EQ(r.execution_match, false);
}

TEST(Cot, InputErrors) {
  SchemaDescription d{"db", "Table: t\na INTEGER", false, 0, {}};
  NlSqlExample ex{"", "SELECT a FROM t", "db", 3, "train"};
  try {
    build_teacher_prompt(ex, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "EmptyQuestion");
  }
  ex.question = "q";
  EXPECT_THROW(assemble_cot_record(ex, d, "  ", "SELECT a FROM t"), InvalidArgument);
  EXPECT_THROW(assemble_cot_record(ex, d, "why", "SELECT FROM"), SyntaxError);
  EXPECT_THROW(split_teacher_output("no fence here"), InvalidArgument);
}

TEST(Cot, StepDetection) {
  const auto five = detect_steps(
      "Query analysis: the question asks for names. Table selection: the target table is singer. Column "
      "selection: name corresponds to the name column. Join strategy: no joins. Self-validation: verify columns.");
  EXPECT_EQ(five.taxonomy, "five-step");
  EXPECT_EQ(detect_steps("Just select it.").taxonomy, "partial");
}
