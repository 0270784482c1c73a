#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <stop_token>
#include <string>
#include <vector>

#include "nl2sql/corpus.hpp"
#include "nl2sql/curator.hpp"
#include "nl2sql/prediction.hpp"
#include "nl2sql/prompts.hpp"

namespace nl2sql {

/// Where and how to reach a chat-completion endpoint.
struct EndpointConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  /// Name of the environment variable holding a bearer token; empty = no auth.
  std::string token_env;
  double timeout_seconds = 60.0;
  int max_retries = 5;
  double backoff_base_seconds = 1.0;
  double backoff_multiplier = 2.0;
  std::size_t max_concurrent = 4;
  double temperature = 0.0;

  /// Throws InvalidArgument(ConfigError).
  void validate() const;
};

struct PromptOptions {
  PromptMode mode = PromptMode::Direct;
  bool self_correction = false;
};

struct BatchItem {
  std::string key;
  std::vector<ChatMessage> messages;
};

/// Renders one request per dataset item. `descriptions` is keyed by db_id;
/// a missing entry raises InvalidArgument(SchemaMismatch).
std::vector<BatchItem> build_batch(const CuratedDataset& dataset,
                                   const std::map<std::string, SchemaDescription>& descriptions,
                                   const PromptOptions& options);

/// JSON body of one chat-completion request.
std::string chat_request_body(const EndpointConfig& config, const std::vector<ChatMessage>& messages);

/// choices[0].message.content; throws FormatError on any other shape.
std::string parse_chat_response(std::string_view body);

struct BatchResult {
  /// In item order. Complete unless the run was cancelled.
  PredictionSet predictions;
  std::size_t requested = 0;  // items sent to the endpoint in this run
  std::size_t resumed = 0;    // items found in the output file and skipped
  std::size_t failed = 0;     // items recorded with a transport error
  bool cancelled = false;
};

struct BatchOptions {
  /// Re-request items whose stored prediction carries an error.
  bool retry_failed = false;
  /// Called after each completed item with (completed, total).
  std::function<void(std::size_t, std::size_t)> on_progress;
};

/// Sends every item not already present in `output`, at most
/// config.max_concurrent at a time, appending each finished prediction to
/// `output` as it lands. 429 and 5xx responses and connection failures are
/// retried with exponential backoff; exhausted items are recorded with an
/// error instead of being dropped. A finished run rewrites `output` in item
/// order; a cancelled one leaves a valid partial file for resumption.
/// Throws InvalidArgument(AuthMissing) before any request when the token
/// variable is configured but unset or empty.
BatchResult run_batch(const std::vector<BatchItem>& items, const EndpointConfig& config,
                      const std::filesystem::path& output, std::stop_token stop = {}, const BatchOptions& options = {});

}  // namespace nl2sql
