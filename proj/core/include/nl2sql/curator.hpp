#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nl2sql/complexity.hpp"

namespace nl2sql {

/// Target share of each bucket plus the requested size.
struct DistributionSpec {
  double hard = 0.4;
  double medium = 0.5;
  double easy = 0.1;
  std::size_t total = 0;

  double fraction(DifficultyBucket b) const;

  /// Throws InvalidArgument(ConfigError) unless the fractions are
  /// non-negative, sum to 1 within 1e-9 and total is positive.
  void validate() const;

  /// Per-bucket counts (indexed by DifficultyBucket) summing to total.
  std::array<std::size_t, 3> targets() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Largest-remainder apportionment of `total` proportionally to `weights`.
/// Remainder ties go to the earlier entry in `tie_order` (indices into
/// weights); an empty tie_order means index order. Weights must be
/// non-negative with a positive sum unless total is zero.
std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total,
                                   std::span<const std::size_t> tie_order = {});

struct SplitInfo {
  std::string part;  // "train" or "val"
  std::size_t train_count = 0;
  std::size_t val_count = 0;

  friend bool operator==(const SplitInfo&, const SplitInfo&) = default;
};

/// Provenance of a dataset file. Everything needed to regenerate it.
struct Manifest {
  std::string mode;  // scored | passthrough | curated | benchmark | split
  std::uint64_t seed = 0;
  WeightsConfig weights;
  ThresholdsConfig thresholds;
  std::optional<DistributionSpec> distribution;
  std::optional<SplitInfo> split;
  std::string source_digest;  // sha256 of the input file(s), when known
  std::string pool_digest;    // sha256 of the canonical pool the items were drawn from
  std::size_t excluded = 0;   // pool items removed by leakage filtering
  std::array<std::size_t, 3> counts{};  // indexed by DifficultyBucket
  std::size_t total = 0;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct CuratedDataset {
  std::vector<ScoredExample> items;
  Manifest manifest;
};

/// (split, source_index): unique within any dataset.
std::pair<std::string, std::size_t> item_identity(const NlSqlExample& example);

/// Order-sensitive digest of the item identities, text and labels.
std::string pool_digest(std::span<const ScoredExample> pool);

/// Per-bucket counts of a list of items.
std::array<std::size_t, 3> bucket_counts(std::span<const ScoredExample> items);

/// Wraps a scored pool without sampling (mode "passthrough").
CuratedDataset passthrough(std::vector<ScoredExample> pool, const WeightsConfig& weights = {},
                           const ThresholdsConfig& thresholds = {});

/// Draws exactly spec.targets() items per bucket by a seeded shuffle of each
/// bucket, then shuffles the concatenation. Throws InsufficientBucket.
CuratedDataset stratified_curate(std::span<const ScoredExample> pool, const DistributionSpec& spec,
                                 std::uint64_t seed);

/// Stratified train / validation partition. Each bucket is split in the
/// train:val proportion; item order within each part follows the input.
/// Throws InvalidArgument(SizeMismatch).
std::pair<CuratedDataset, CuratedDataset> split_train_val(const CuratedDataset& dataset, std::size_t train_count,
                                                          std::size_t val_count, std::uint64_t seed);

/// stratified_curate over the pool minus every item sharing an identity or an
/// exact (question, gold_sql) pair with `exclude`.
CuratedDataset build_benchmark(std::span<const ScoredExample> pool, const DistributionSpec& spec,
                               std::span<const ScoredExample> exclude, std::uint64_t seed);

/// Deterministic across platforms: mt19937_64 output is fully specified and
/// the bounded draw below does not depend on library distributions.
class SeededShuffle {
 public:
  explicit SeededShuffle(std::uint64_t seed);

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nl2sql
