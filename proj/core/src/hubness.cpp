#include "zsl/hubness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zsl {

std::vector<int> nk_counts(const std::vector<Ranking>& rankings, int k,
                           int num_targets) {
  if (rankings.empty())
    throw std::invalid_argument("nk_counts: no rankings");
  if (k < 1 || k > num_targets)
    throw std::invalid_argument("nk_counts: k = " + std::to_string(k) +
                                " out of range for " +
                                std::to_string(num_targets) + " targets");
  std::vector<int> counts(num_targets, 0);
  for (const Ranking& r : rankings) {
    if (static_cast<int>(r.ordered.size()) < k)
      throw std::invalid_argument("nk_counts: ranking shorter than k");
    for (int j = 0; j < k; ++j) ++counts[r.ordered[j].target];
  }
  return counts;
}

double skewness(const std::vector<int>& counts) {
  if (counts.empty())
    throw std::invalid_argument("skewness: empty counts");
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (int c : counts) mean += c;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (int c : counts) {
    const double d = c - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 == 0.0) return 0.0;  // uniform counts: no hubs by definition
  return m3 / std::pow(m2, 1.5);
}

HubnessReport hubness_report(const std::vector<Ranking>& rankings, int k,
                             int num_targets) {
  HubnessReport report;
  report.k = k;
  report.num_queries = static_cast<int>(rankings.size());
  report.counts = nk_counts(rankings, k, num_targets);
  report.skewness = skewness(report.counts);
  return report;
}

}  // namespace zsl
