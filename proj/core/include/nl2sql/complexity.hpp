#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nl2sql/example.hpp"
#include "nl2sql/sql/inventory.hpp"

namespace nl2sql {

enum class DifficultyBucket { Easy, Medium, Hard };

inline constexpr std::array<DifficultyBucket, 3> kAllBuckets = {DifficultyBucket::Easy, DifficultyBucket::Medium,
                                                                DifficultyBucket::Hard};

std::string_view to_string(DifficultyBucket bucket);
/// Accepts "Easy"/"Medium"/"Hard" case-insensitively; throws FormatError otherwise.
DifficultyBucket parse_bucket(std::string_view text);

/// Points per clause occurrence. `nesting` is added per nested select on top
/// of that select's own recursive score. The trailing three weights are
/// optional extensions and default to zero.
struct WeightsConfig {
  double join = 1.0;
  double group_by = 1.0;
  double order_by = 1.0;
  double having = 1.0;
  double nesting = 1.0;
  double limit = 0.0;
  double distinct = 0.0;
  double aggregate = 0.0;

  /// Throws InvalidArgument(ConfigError) when any weight is negative or not finite.
  void validate() const;
  WeightsConfig scaled(double factor) const;

  friend bool operator==(const WeightsConfig&, const WeightsConfig&) = default;
};

/// score <= easy_max -> Easy; score <= medium_max -> Medium; else Hard.
struct ThresholdsConfig {
  double easy_max = 1.0;
  double medium_max = 3.0;

  /// Requires 0 <= easy_max < medium_max.
  void validate() const;

  friend bool operator==(const ThresholdsConfig&, const ThresholdsConfig&) = default;
};

double score_query(const sql::ClauseInventory& inventory, const WeightsConfig& weights = {});

DifficultyBucket bucket(double score, const ThresholdsConfig& thresholds = {});

struct ScoredExample {
  NlSqlExample example;
  double score = 0.0;
  DifficultyBucket bucket = DifficultyBucket::Easy;
  sql::ClauseInventory inventory;
};

/// Parses, inventories, scores and buckets one example. Throws SyntaxError or
/// UnsupportedStatement when the gold SQL cannot be parsed.
ScoredExample score_example(const NlSqlExample& example, const WeightsConfig& weights = {},
                            const ThresholdsConfig& thresholds = {});

struct BucketStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct DistributionSummary {
  std::array<BucketStats, 3> buckets{};  // indexed by DifficultyBucket
  std::size_t total = 0;

  const BucketStats& at(DifficultyBucket b) const { return buckets[static_cast<std::size_t>(b)]; }
};

DistributionSummary summarize(std::span<const ScoredExample> items);

struct SkippedExample {
  std::size_t source_index = 0;
  std::string reason;
};

struct ScoredCorpus {
  std::vector<ScoredExample> items;
  DistributionSummary summary;
  std::vector<SkippedExample> skipped;
};

/// Scores every example; unparseable gold SQL lands in `skipped` with the
/// parser's message rather than aborting the run.
ScoredCorpus score_corpus(std::span<const NlSqlExample> examples, const WeightsConfig& weights = {},
                          const ThresholdsConfig& thresholds = {});

/// Table with columns Difficulty | Query Count | Score Min | Score Max | Median Score.
std::string render_summary_table(const DistributionSummary& summary);
std::string render_summary_csv(const DistributionSummary& summary);

}  // namespace nl2sql
