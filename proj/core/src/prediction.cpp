#include "nl2sql/prediction.hpp"

#include <map>

#include "json.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"

namespace nl2sql {

using ojson = nlohmann::ordered_json;

std::string prediction_key(const NlSqlExample& example) {
  return example.db_id + "/" + std::to_string(example.source_index);
}

std::string prediction_to_json_line(const Prediction& p) {
  ojson j;
  j["key"] = p.key;
  j["raw_output"] = p.raw_output;
  j["latency_ms"] = p.latency_ms;
  j["retries"] = p.retries;
  if (p.error) j["error"] = *p.error;
  return j.dump() + "\n";
}

PredictionFile parse_predictions(std::string_view text, const std::string& source) {
  PredictionFile file;
  std::map<std::string, std::size_t> position;
  const auto lines = split_lines(text);
  const bool ends_cleanly = text.empty() || text.back() == '\n';
  for (std::size_t i = 0; i < lines.size(); ++i) {
    ojson j;
    try {
      j = ojson::parse(lines[i]);
    } catch (const ojson::parse_error& e) {
      if (i + 1 == lines.size() && !ends_cleanly) {
        file.truncated_tail = true;
        break;
      }
      throw FormatError(source, static_cast<std::ptrdiff_t>(i), std::string("invalid JSON line: ") + e.what());
    }
    Prediction p;
    try {
      p.key = j.at("key").get<std::string>();
      p.raw_output = j.at("raw_output").get<std::string>();
      p.latency_ms = j.value("latency_ms", std::int64_t{0});
      p.retries = j.value("retries", 0);
      if (j.contains("error") && j["error"].is_string()) p.error = j["error"].get<std::string>();
    } catch (const ojson::exception& e) {
      throw FormatError(source, static_cast<std::ptrdiff_t>(i), e.what());
    }
    if (auto it = position.find(p.key); it != position.end()) {
      file.predictions[it->second] = std::move(p);
    } else {
      position.emplace(p.key, file.predictions.size());
      file.predictions.push_back(std::move(p));
    }
  }
  return file;
}

PredictionFile load_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_file(path), path.string());
}

void save_predictions(const PredictionSet& predictions, const std::filesystem::path& path) {
  std::string out;
  for (const auto& p : predictions) out += prediction_to_json_line(p);
  write_file_atomic(path, out);
}

}  // namespace nl2sql
