#pragma once

#include <cstdint>
#include <string>

#include "nl2sql/result_table.hpp"

namespace nl2sql::testing {

struct PropertyResult {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

// Generated-case checks of the result comparator. Each runs `cases` cases
// from a fixed seed.
PropertyResult permutation_invariance(int cases, std::uint64_t seed);
PropertyResult order_sensitivity(int cases, std::uint64_t seed);
PropertyResult duplicate_sensitivity(int cases, std::uint64_t seed);
PropertyResult relative_tolerance(int cases, std::uint64_t seed);
PropertyResult tolerant_bag_matching(int cases, std::uint64_t seed);
PropertyResult reference_agreement(int cases, std::uint64_t seed);

/// Exact reference comparison: same width and equal rendered rows, sorted
/// first unless `ordered`.
bool reference_equal(const ResultTable& a, const ResultTable& b, bool ordered);

}  // namespace nl2sql::testing
