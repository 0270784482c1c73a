#include "fixtures.hpp"

#include <atomic>
#include <random>

#include "nl2sql/file_io.hpp"
#include "nl2sql/sqlite_db.hpp"

namespace nl2sql::testing {

namespace fs = std::filesystem;

fs::path fixture_dir() { return fs::path(NL2SQL_FIXTURE_DIR); }

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = fs::temp_directory_path() /
                     (prefix + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (fs::create_directories(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path materialize_spider(const fs::path& root) {
  const fs::path src = fixture_dir() / "spider";
  fs::create_directories(root);
  for (const char* name : {"tables.json", "train.json", "dev.json"}) {
    fs::copy_file(src / name, root / name, fs::copy_options::overwrite_existing);
  }
  for (const auto& entry : fs::directory_iterator(src / "database")) {
    if (!entry.is_directory()) continue;
    const std::string db_id = entry.path().filename().string();
    const fs::path target = root / "database" / db_id / (db_id + ".sqlite");
    fs::create_directories(target.parent_path());
    db::build_database(target, read_file(entry.path() / "schema.sql"));
  }
  return root;
}

}  // namespace nl2sql::testing
