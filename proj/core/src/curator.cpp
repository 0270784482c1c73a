#include "nl2sql/curator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "nl2sql/digest.hpp"
#include "nl2sql/error.hpp"

namespace nl2sql {

namespace {

// Ties in the remainder go to Hard first, then Medium: the hard share is the
// one the curated sets are built around.
constexpr std::array<std::size_t, 3> kBucketTieOrder = {2, 1, 0};

std::size_t index_of(DifficultyBucket b) { return static_cast<std::size_t>(b); }

bool identity_less(const ScoredExample& a, const ScoredExample& b) {
  return item_identity(a.example) < item_identity(b.example);
}

void check_unique(std::span<const ScoredExample> pool) {
  std::set<std::pair<std::string, std::size_t>> seen;
  for (const auto& item : pool) {
    if (!seen.insert(item_identity(item.example)).second) {
      throw InvalidArgument("DuplicateItem", "item " + item.example.split + ":" +
                                                 std::to_string(item.example.source_index) +
                                                 " appears more than once in the pool");
    }
  }
}

Manifest base_manifest(std::span<const ScoredExample> pool, std::span<const ScoredExample> items) {
  Manifest m;
  m.pool_digest = pool_digest(pool);
  m.counts = bucket_counts(items);
  m.total = items.size();
  return m;
}

}  // namespace

double DistributionSpec::fraction(DifficultyBucket b) const {
  switch (b) {
    case DifficultyBucket::Easy: return easy;
    case DifficultyBucket::Medium: return medium;
    case DifficultyBucket::Hard: return hard;
  }
  return 0.0;
}

void DistributionSpec::validate() const {
  for (double f : {hard, medium, easy}) {
    if (!std::isfinite(f) || f < 0.0) throw InvalidArgument("ConfigError", "distribution fractions must be >= 0");
  }
  if (std::fabs(hard + medium + easy - 1.0) > 1e-9) {
    throw InvalidArgument("ConfigError", "distribution fractions must sum to 1");
  }
  if (total == 0) throw InvalidArgument("ConfigError", "distribution total must be positive");
}

std::array<std::size_t, 3> DistributionSpec::targets() const {
  validate();
  const std::array<double, 3> weights = {easy, medium, hard};
  const auto counts = apportion(weights, total, kBucketTieOrder);
  return {counts[0], counts[1], counts[2]};
}

std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total,
                                   std::span<const std::size_t> tie_order) {
  std::vector<std::size_t> counts(weights.size(), 0);
  if (total == 0 || weights.empty()) return counts;
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidArgument("ConfigError", "apportion weights must have a positive sum");

  std::vector<std::size_t> order(tie_order.begin(), tie_order.end());
  if (order.empty()) {
    order.resize(weights.size());
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<double> remainder(weights.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = weights[i] / sum * static_cast<double>(total);
    // Guard against 0.1 * 5500 = 550.0000000000001 style representation noise.
    const double floor_q = std::floor(quota + 1e-9);
    counts[i] = static_cast<std::size_t>(floor_q);
    remainder[i] = std::max(0.0, quota - floor_q);
    assigned += counts[i];
  }
  // stable_sort keeps tie_order precedence among equal remainders.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b] + 1e-12;
  });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

std::pair<std::string, std::size_t> item_identity(const NlSqlExample& example) {
  return {example.split, example.source_index};
}

std::string pool_digest(std::span<const ScoredExample> pool) {
  std::string canonical;
  for (const auto& item : pool) {
    const auto& e = item.example;
    canonical += e.split + '\x1f' + std::to_string(e.source_index) + '\x1f' + e.db_id + '\x1f' + e.question + '\x1f' +
                 e.gold_sql + '\x1f' + std::string(to_string(item.bucket)) + '\x1e';
  }
  return sha256_hex(canonical);
}

std::array<std::size_t, 3> bucket_counts(std::span<const ScoredExample> items) {
  std::array<std::size_t, 3> counts{};
  for (const auto& item : items) ++counts[index_of(item.bucket)];
  return counts;
}

CuratedDataset passthrough(std::vector<ScoredExample> pool, const WeightsConfig& weights,
                           const ThresholdsConfig& thresholds) {
  check_unique(pool);
  CuratedDataset out;
  out.manifest = base_manifest(pool, pool);
  out.manifest.mode = "passthrough";
  out.manifest.weights = weights;
  out.manifest.thresholds = thresholds;
  out.items = std::move(pool);
  return out;
}

SeededShuffle::SeededShuffle(std::uint64_t seed) : engine_(seed) {}

std::uint64_t SeededShuffle::below(std::uint64_t bound) {
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

CuratedDataset stratified_curate(std::span<const ScoredExample> pool, const DistributionSpec& spec,
                                 std::uint64_t seed) {
  const auto targets = spec.targets();
  check_unique(pool);

  std::array<std::vector<ScoredExample>, 3> by_bucket;
  for (const auto& item : pool) by_bucket[index_of(item.bucket)].push_back(item);
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    const auto& have = by_bucket[index_of(b)];
    if (have.size() < targets[index_of(b)]) {
      throw InsufficientBucket(std::string(to_string(b)), have.size(), targets[index_of(b)]);
    }
  }

  // Input order must not leak into the result, so buckets are canonicalized
  // by identity before the seeded draw.
  SeededShuffle rng(seed);
  std::vector<ScoredExample> items;
  items.reserve(spec.total);
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    auto& bucket_items = by_bucket[index_of(b)];
    std::sort(bucket_items.begin(), bucket_items.end(), identity_less);
    rng.shuffle(bucket_items);
    const auto take = static_cast<std::ptrdiff_t>(targets[index_of(b)]);
    items.insert(items.end(), bucket_items.begin(), bucket_items.begin() + take);
  }
  rng.shuffle(items);

  CuratedDataset out;
  std::vector<ScoredExample> canonical_pool(pool.begin(), pool.end());
  std::sort(canonical_pool.begin(), canonical_pool.end(), identity_less);
  out.manifest = base_manifest(canonical_pool, items);
  out.manifest.mode = "curated";
  out.manifest.seed = seed;
  out.manifest.distribution = spec;
  out.items = std::move(items);
  return out;
}

std::pair<CuratedDataset, CuratedDataset> split_train_val(const CuratedDataset& dataset, std::size_t train_count,
                                                          std::size_t val_count, std::uint64_t seed) {
  const std::size_t n = dataset.items.size();
  if (train_count + val_count != n) {
    throw InvalidArgument("SizeMismatch", "train " + std::to_string(train_count) + " + val " +
                                              std::to_string(val_count) + " != dataset size " + std::to_string(n));
  }

  const auto counts = bucket_counts(dataset.items);
  const std::array<double, 3> weights = {static_cast<double>(counts[0]), static_cast<double>(counts[1]),
                                         static_cast<double>(counts[2])};
  const auto val_targets = n == 0 ? std::vector<std::size_t>(3, 0) : apportion(weights, val_count, kBucketTieOrder);

  // Indices per bucket in canonical identity order, then shuffled.
  std::array<std::vector<std::size_t>, 3> by_bucket;
  for (std::size_t i = 0; i < n; ++i) by_bucket[index_of(dataset.items[i].bucket)].push_back(i);
  SeededShuffle rng(seed);
  std::vector<bool> is_val(n, false);
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    auto& idx = by_bucket[index_of(b)];
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t c) {
      return identity_less(dataset.items[a], dataset.items[c]);
    });
    rng.shuffle(idx);
    for (std::size_t k = 0; k < val_targets[index_of(b)]; ++k) is_val[idx[k]] = true;
  }

  CuratedDataset train, val;
  for (std::size_t i = 0; i < n; ++i) (is_val[i] ? val : train).items.push_back(dataset.items[i]);

  auto finish = [&](CuratedDataset& part, const char* name) {
    part.manifest = dataset.manifest;
    part.manifest.mode = "split";
    part.manifest.seed = seed;
    part.manifest.split = SplitInfo{name, train_count, val_count};
    part.manifest.pool_digest = pool_digest(dataset.items);
    part.manifest.counts = bucket_counts(part.items);
    part.manifest.total = part.items.size();
  };
  finish(train, "train");
  finish(val, "val");
  return {std::move(train), std::move(val)};
}

CuratedDataset build_benchmark(std::span<const ScoredExample> pool, const DistributionSpec& spec,
                               std::span<const ScoredExample> exclude, std::uint64_t seed) {
  std::set<std::pair<std::string, std::size_t>> excluded_ids;
  std::set<std::pair<std::string, std::string>> excluded_pairs;
  for (const auto& item : exclude) {
    excluded_ids.insert(item_identity(item.example));
    excluded_pairs.emplace(item.example.question, item.example.gold_sql);
  }
  std::vector<ScoredExample> remaining;
  remaining.reserve(pool.size());
  for (const auto& item : pool) {
    if (excluded_ids.contains(item_identity(item.example))) continue;
    if (excluded_pairs.contains({item.example.question, item.example.gold_sql})) continue;
    remaining.push_back(item);
  }
  CuratedDataset out = stratified_curate(remaining, spec, seed);
  out.manifest.mode = "benchmark";
  out.manifest.excluded = pool.size() - remaining.size();
  return out;
}

}  // namespace nl2sql
