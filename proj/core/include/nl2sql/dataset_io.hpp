#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nl2sql/curator.hpp"

namespace nl2sql {

/// One line per item:
/// {"source_index","split","question","gold_sql","db_id","score","bucket"}.
std::string items_to_jsonl(std::span<const ScoredExample> items);

/// Parses the line format above. Clause inventories are recomputed from the
/// gold SQL; score and bucket are taken from the file as written.
std::vector<ScoredExample> items_from_jsonl(std::string_view text, const std::string& source);

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view text, const std::string& source);

/// "<path>.manifest.json"
std::filesystem::path manifest_path(const std::filesystem::path& dataset_path);

/// Writes the item file and its manifest sidecar atomically.
void save_dataset(const CuratedDataset& dataset, const std::filesystem::path& path);

/// Reads the item file and, when present, its sidecar. Without a sidecar the
/// manifest holds only recomputed counts and mode "unknown".
CuratedDataset load_dataset(const std::filesystem::path& path);

}  // namespace nl2sql
