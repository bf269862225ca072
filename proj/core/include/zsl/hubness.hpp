#pragma once

#include "zsl/neighbors.hpp"

#include <vector>

namespace zsl {

/// k-occurrence summary of a set of rankings: counts[i] is the number of
/// queries whose top-k list contains target i, and skewness is the third
/// standardized moment of that count distribution. Large positive skewness
/// means a few targets dominate the neighbor lists.
struct HubnessReport {
  int k = 0;
  std::vector<int> counts;
  double skewness = 0.0;
  int num_queries = 0;
};

/// counts[i] = number of rankings whose first k entries include target i.
/// The counts sum to k * rankings.size() when k <= num_targets.
std::vector<int> nk_counts(const std::vector<Ranking>& rankings, int k,
                           int num_targets);

/// Third standardized moment using population (divide-by-length) variance.
/// A zero-variance vector has skewness 0.
double skewness(const std::vector<int>& counts);

HubnessReport hubness_report(const std::vector<Ranking>& rankings, int k,
                             int num_targets);

}  // namespace zsl
