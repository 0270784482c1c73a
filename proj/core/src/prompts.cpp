#include "nl2sql/prompts.hpp"

#include <algorithm>
#include <cctype>

#include "nl2sql/error.hpp"

namespace nl2sql {

std::string_view to_string(PromptMode mode) { return mode == PromptMode::Cot ? "cot" : "direct"; }

PromptMode parse_prompt_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cot") return PromptMode::Cot;
  if (lower == "direct") return PromptMode::Direct;
  throw InvalidArgument("ConfigError", "unknown prompt mode \"" + std::string(text) + "\" (expected direct or cot)");
}

std::string render_user_content(const NlSqlExample& example, const SchemaDescription& description) {
  return "DATABASE SCHEMA:\n" + description.text + "\n\nQuestion: " + example.question;
}

std::vector<ChatMessage> render_inference_prompt(const NlSqlExample& example, const SchemaDescription& description,
                                                 PromptMode mode, bool self_correction) {
  if (description.db_id != example.db_id) {
    throw InvalidArgument("SchemaMismatch", "schema description for \"" + description.db_id +
                                                "\" does not match example database \"" + example.db_id + "\"");
  }
  std::string system(mode == PromptMode::Cot ? kCotSystemPrompt : kDirectSystemPrompt);
  if (self_correction) {
    system += ' ';
    system += kSelfCorrectionDirective;
  }
  return {{"system", std::move(system)}, {"user", render_user_content(example, description)}};
}

}  // namespace nl2sql
