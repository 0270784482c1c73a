#include "nl2sql/complexity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nl2sql/error.hpp"
#include "nl2sql/sql/parser.hpp"
#include "nl2sql/text_format.hpp"

namespace nl2sql {

std::string_view to_string(DifficultyBucket b) {
  switch (b) {
    case DifficultyBucket::Easy:
      return "Easy";
    case DifficultyBucket::Medium:
      return "Medium";
    case DifficultyBucket::Hard:
      return "Hard";
  }
  return "Easy";
}

DifficultyBucket parse_bucket(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "easy") return DifficultyBucket::Easy;
  if (lower == "medium") return DifficultyBucket::Medium;
  if (lower == "hard") return DifficultyBucket::Hard;
  throw FormatError("bucket", -1, "unknown difficulty bucket \"" + std::string(text) + "\"");
}

void WeightsConfig::validate() const {
  for (double w : {join, group_by, order_by, having, nesting, limit, distinct, aggregate}) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("ConfigError", "weights must be finite and >= 0");
  }
}

WeightsConfig WeightsConfig::scaled(double f) const {
  return {join * f, group_by * f, order_by * f, having * f, nesting * f, limit * f, distinct * f, aggregate * f};
}

void ThresholdsConfig::validate() const {
  if (!std::isfinite(easy_max) || !std::isfinite(medium_max) || easy_max < 0.0 || !(easy_max < medium_max)) {
    throw InvalidArgument("ConfigError", "thresholds require 0 <= easy_max < medium_max");
  }
}

double score_query(const sql::ClauseInventory& inv, const WeightsConfig& w) {
  double score = w.join * static_cast<double>(inv.join_count);
  if (inv.has_group_by) score += w.group_by;
  if (inv.has_order_by) score += w.order_by;
  if (inv.has_having) score += w.having;
  if (inv.has_limit) score += w.limit;
  if (inv.has_distinct) score += w.distinct;
  score += w.aggregate * static_cast<double>(inv.aggregate_count);
  for (const auto& sub : inv.subqueries) score += w.nesting + score_query(sub, w);
  return score;
}

DifficultyBucket bucket(double score, const ThresholdsConfig& t) {
  if (score <= t.easy_max) return DifficultyBucket::Easy;
  if (score <= t.medium_max) return DifficultyBucket::Medium;
  return DifficultyBucket::Hard;
}

ScoredExample score_example(const NlSqlExample& example, const WeightsConfig& weights,
                            const ThresholdsConfig& thresholds) {
  ScoredExample scored;
  scored.example = example;
  scored.inventory = sql::clause_inventory(sql::parse_sql(example.gold_sql));
  scored.score = score_query(scored.inventory, weights);
  scored.bucket = bucket(scored.score, thresholds);
  return scored;
}

DistributionSummary summarize(std::span<const ScoredExample> items) {
  DistributionSummary summary;
  std::array<std::vector<double>, 3> scores;
  for (const auto& item : items) scores[static_cast<std::size_t>(item.bucket)].push_back(item.score);
  for (std::size_t b = 0; b < scores.size(); ++b) {
    auto& v = scores[b];
    auto& stats = summary.buckets[b];
    stats.count = v.size();
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    stats.min = v.front();
    stats.max = v.back();
    const std::size_t mid = v.size() / 2;
    stats.median = v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
  }
  summary.total = items.size();
  return summary;
}

ScoredCorpus score_corpus(std::span<const NlSqlExample> examples, const WeightsConfig& weights,
                          const ThresholdsConfig& thresholds) {
  weights.validate();
  thresholds.validate();
  ScoredCorpus corpus;
  corpus.items.reserve(examples.size());
  for (const auto& ex : examples) {
    try {
      corpus.items.push_back(score_example(ex, weights, thresholds));
    } catch (const Error& e) {
      corpus.skipped.push_back({ex.source_index, e.kind() + ": " + e.what()});
    }
  }
  corpus.summary = summarize(corpus.items);
  return corpus;
}

namespace {

std::vector<std::vector<std::string>> summary_rows(const DistributionSummary& s) {
  std::vector<std::vector<std::string>> rows;
  for (auto b : kAllBuckets) {
    const auto& st = s.at(b);
    const bool empty = st.count == 0;
    rows.push_back({std::string(to_string(b)), std::to_string(st.count), empty ? "-" : format_number(st.min),
                    empty ? "-" : format_number(st.max), empty ? "-" : format_fixed(st.median, 1)});
  }
  return rows;
}

}  // namespace

std::string render_summary_table(const DistributionSummary& s) {
  return markdown_table({"Difficulty", "Query Count", "Score Min", "Score Max", "Median Score"}, summary_rows(s));
}

std::string render_summary_csv(const DistributionSummary& s) {
  std::string out = csv_row({"difficulty", "query_count", "score_min", "score_max", "median_score"});
  for (const auto& row : summary_rows(s)) out += csv_row(row);
  return out;
}

}  // namespace nl2sql
