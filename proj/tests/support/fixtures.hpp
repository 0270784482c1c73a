#pragma once

#include <filesystem>
#include <string>

namespace nl2sql::testing {

/// tests/fixtures in the source tree.
std::filesystem::path fixture_dir();

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "nl2sql-test");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Copies the Spider-format fixture corpus into `root` and builds every
/// database/<db_id>/<db_id>.sqlite from its schema.sql. Returns `root`.
std::filesystem::path materialize_spider(const std::filesystem::path& root);

}  // namespace nl2sql::testing
