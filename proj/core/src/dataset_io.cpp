#include "nl2sql/dataset_io.hpp"

#include "json.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/sql/inventory.hpp"
#include "nl2sql/sql/parser.hpp"

namespace nl2sql {

using ojson = nlohmann::ordered_json;

namespace {

ojson weights_json(const WeightsConfig& w) {
  ojson j;
  j["join"] = w.join;
  j["group_by"] = w.group_by;
  j["order_by"] = w.order_by;
  j["having"] = w.having;
  j["nesting"] = w.nesting;
  j["limit"] = w.limit;
  j["distinct"] = w.distinct;
  j["aggregate"] = w.aggregate;
  return j;
}

WeightsConfig weights_from(const ojson& j) {
  WeightsConfig w;
  w.join = j.value("join", w.join);
  w.group_by = j.value("group_by", w.group_by);
  w.order_by = j.value("order_by", w.order_by);
  w.having = j.value("having", w.having);
  w.nesting = j.value("nesting", w.nesting);
  w.limit = j.value("limit", w.limit);
  w.distinct = j.value("distinct", w.distinct);
  w.aggregate = j.value("aggregate", w.aggregate);
  return w;
}

ojson counts_json(const std::array<std::size_t, 3>& counts) {
  ojson j;
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    j[std::string(to_string(b))] = counts[static_cast<std::size_t>(b)];
  }
  return j;
}

}  // namespace

std::string items_to_jsonl(std::span<const ScoredExample> items) {
  std::string out;
  for (const auto& item : items) {
    ojson j;
    j["source_index"] = item.example.source_index;
    j["split"] = item.example.split;
    j["question"] = item.example.question;
    j["gold_sql"] = item.example.gold_sql;
    j["db_id"] = item.example.db_id;
    j["score"] = item.score;
    j["bucket"] = to_string(item.bucket);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ScoredExample> items_from_jsonl(std::string_view text, const std::string& source) {
  std::vector<ScoredExample> items;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    ojson j;
    try {
      j = ojson::parse(lines[i]);
    } catch (const ojson::parse_error& e) {
      throw FormatError(source, idx, std::string("invalid JSON line: ") + e.what());
    }
    if (!j.is_object()) throw FormatError(source, idx, "expected an object");
    ScoredExample item;
    try {
      item.example.source_index = j.at("source_index").get<std::size_t>();
      item.example.split = j.value("split", std::string{});
      item.example.question = j.at("question").get<std::string>();
      item.example.gold_sql = j.at("gold_sql").get<std::string>();
      item.example.db_id = j.at("db_id").get<std::string>();
      item.score = j.at("score").get<double>();
      item.bucket = parse_bucket(j.at("bucket").get<std::string>());
    } catch (const ojson::exception& e) {
      throw FormatError(source, idx, e.what());
    }
    try {
      item.inventory = sql::clause_inventory(sql::parse_sql(item.example.gold_sql));
    } catch (const Error& e) {
      throw FormatError(source, idx, std::string("gold_sql does not parse: ") + e.what());
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::string manifest_to_json(const Manifest& m) {
  ojson j;
  j["mode"] = m.mode;
  j["seed"] = m.seed;
  j["weights"] = weights_json(m.weights);
  j["thresholds"] = {{"easy_max", m.thresholds.easy_max}, {"medium_max", m.thresholds.medium_max}};
  if (m.distribution) {
    j["distribution"] = {{"hard", m.distribution->hard},
                         {"medium", m.distribution->medium},
                         {"easy", m.distribution->easy},
                         {"total", m.distribution->total}};
  } else {
    j["distribution"] = nullptr;
  }
  if (m.split) {
    j["split"] = {{"part", m.split->part}, {"train_count", m.split->train_count}, {"val_count", m.split->val_count}};
  }
  j["source_digest"] = m.source_digest;
  j["pool_digest"] = m.pool_digest;
  j["excluded"] = m.excluded;
  j["counts"] = counts_json(m.counts);
  j["total"] = m.total;
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text, const std::string& source) {
  Manifest m;
  try {
    const ojson j = ojson::parse(text);
    m.mode = j.value("mode", std::string("unknown"));
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("weights")) m.weights = weights_from(j["weights"]);
    if (j.contains("thresholds")) {
      m.thresholds.easy_max = j["thresholds"].value("easy_max", m.thresholds.easy_max);
      m.thresholds.medium_max = j["thresholds"].value("medium_max", m.thresholds.medium_max);
    }
    if (j.contains("distribution") && j["distribution"].is_object()) {
      const auto& d = j["distribution"];
      m.distribution = DistributionSpec{d.at("hard").get<double>(), d.at("medium").get<double>(),
                                        d.at("easy").get<double>(), d.at("total").get<std::size_t>()};
    }
    if (j.contains("split") && j["split"].is_object()) {
      const auto& s = j["split"];
      m.split = SplitInfo{s.at("part").get<std::string>(), s.at("train_count").get<std::size_t>(),
                          s.at("val_count").get<std::size_t>()};
    }
    m.source_digest = j.value("source_digest", std::string{});
    m.pool_digest = j.value("pool_digest", std::string{});
    m.excluded = j.value("excluded", std::size_t{0});
    if (j.contains("counts")) {
      for (DifficultyBucket b : kAllBuckets) {
        m.counts[static_cast<std::size_t>(b)] = j["counts"].value(std::string(to_string(b)), std::size_t{0});
      }
    }
    m.total = j.value("total", std::size_t{0});
  } catch (const ojson::exception& e) {
    throw FormatError(source, -1, std::string("invalid manifest: ") + e.what());
  }
  return m;
}

std::filesystem::path manifest_path(const std::filesystem::path& dataset_path) {
  std::filesystem::path p = dataset_path;
  p += ".manifest.json";
  return p;
}

void save_dataset(const CuratedDataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, items_to_jsonl(dataset.items));
  write_file_atomic(manifest_path(path), manifest_to_json(dataset.manifest));
}

CuratedDataset load_dataset(const std::filesystem::path& path) {
  CuratedDataset ds;
  ds.items = items_from_jsonl(read_file(path), path.string());
  const auto mpath = manifest_path(path);
  if (std::filesystem::exists(mpath)) {
    ds.manifest = manifest_from_json(read_file(mpath), mpath.string());
  } else {
    ds.manifest.mode = "unknown";
  }
  const auto counts = bucket_counts(ds.items);
  if (ds.manifest.mode != "unknown" && (counts != ds.manifest.counts || ds.items.size() != ds.manifest.total)) {
    throw FormatError(mpath.string(), -1, "manifest counts do not match the item file");
  }
  ds.manifest.counts = counts;
  ds.manifest.total = ds.items.size();
  return ds;
}

}  // namespace nl2sql
