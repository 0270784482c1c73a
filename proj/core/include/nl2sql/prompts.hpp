#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/corpus.hpp"
#include "nl2sql/example.hpp"

namespace nl2sql {

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

inline constexpr std::string_view kCotSystemPrompt =
    "You are a powerful text-to-SQL model. Your role is to answer user questions by generating SQL queries against a "
    "given database schema. First, provide a step-by-step chain of thought that explains your reasoning, and then "
    "provide the final SQL query in a markdown code block.";

inline constexpr std::string_view kDirectSystemPrompt =
    "You are a powerful text-to-SQL model. Your role is to answer user questions by generating SQL queries against a "
    "given database schema. Respond with only the final SQL query in a markdown code block.";

inline constexpr std::string_view kSelfCorrectionDirective =
    "Before outputting the final SQL, re-verify column names and syntax against the provided schema.";

enum class PromptMode { Direct, Cot };

std::string_view to_string(PromptMode mode);
/// "direct" or "cot"; throws InvalidArgument(ConfigError).
PromptMode parse_prompt_mode(std::string_view text);

/// "DATABASE SCHEMA:\n" + description + "\n\nQuestion: " + question
std::string render_user_content(const NlSqlExample& example, const SchemaDescription& description);

/// System + user messages. Throws InvalidArgument(SchemaMismatch) when the
/// description belongs to another database.
std::vector<ChatMessage> render_inference_prompt(const NlSqlExample& example, const SchemaDescription& description,
                                                 PromptMode mode, bool self_correction);

}  // namespace nl2sql
