#pragma once

#include "zsl/types.hpp"

#include <vector>

namespace zsl {

enum class DissimilarityKind { Euclidean, Nicdm };

struct DissimilarityMatrix {
  Eigen::MatrixXd values;  // num_queries x num_targets, nonnegative
  DissimilarityKind kind = DissimilarityKind::Euclidean;

  Eigen::Index num_queries() const { return values.rows(); }
  Eigen::Index num_targets() const { return values.cols(); }
};

struct RankedTarget {
  int target = 0;  // column index into the target set
  double dissimilarity = 0.0;
};

/// Full ordering of the target set for one query: ascending dissimilarity,
/// ties broken by ascending target index. Covers every target exactly once.
struct Ranking {
  int query = 0;
  std::vector<RankedTarget> ordered;
};

/// Exact Euclidean distances between every query column and target column.
DissimilarityMatrix pairwise_euclidean(const DataMatrix& queries,
                                       const DataMatrix& targets);

/// Local-scale correction d(i,j) / sqrt(mu_i * nu_j), where mu_i is the mean
/// of the k smallest entries of row i and nu_j the mean of the k smallest
/// entries of column j. Scale-invariant: nicdm(c * D, k) == nicdm(D, k).
DissimilarityMatrix nicdm(const DissimilarityMatrix& dist, int k);

/// One Ranking per query row. Deterministic; rows may be processed in any
/// order without changing the result.
std::vector<Ranking> rank_all(const DissimilarityMatrix& dist);

}  // namespace zsl
