#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/example.hpp"

namespace nl2sql {

/// One raw model answer for one benchmark item.
struct Prediction {
  std::string key;  // prediction_key(example)
  std::string raw_output;
  std::int64_t latency_ms = 0;
  int retries = 0;
  /// Transport failure after all retries; raw_output is then empty.
  std::optional<std::string> error;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

using PredictionSet = std::vector<Prediction>;

/// "<db_id>/<source_index>"
std::string prediction_key(const NlSqlExample& example);

std::string prediction_to_json_line(const Prediction& prediction);

struct PredictionFile {
  PredictionSet predictions;
  /// True when the last line was cut short (an interrupted writer); it is
  /// dropped rather than treated as an error.
  bool truncated_tail = false;
};

/// Parses the line-delimited prediction format. Malformed lines other than a
/// truncated final line raise FormatError. Later duplicates of a key win.
PredictionFile parse_predictions(std::string_view text, const std::string& source);
PredictionFile load_predictions(const std::filesystem::path& path);

void save_predictions(const PredictionSet& predictions, const std::filesystem::path& path);

}  // namespace nl2sql
