#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nl2sql {

/// Whole-file read; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never observe a
/// partially written file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Splits on '\n', dropping a trailing '\r' and blank lines.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace nl2sql
