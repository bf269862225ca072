#include "zsl/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace zsl {

namespace {

// Mean of the k smallest values in [first, last), via partial partitioning.
double mean_of_k_smallest(std::vector<double>& buf, int k) {
  std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += buf[i];
  return sum / k;
}

}  // namespace

DissimilarityMatrix pairwise_euclidean(const DataMatrix& queries,
                                       const DataMatrix& targets) {
  require_finite(queries, "pairwise_euclidean queries");
  require_finite(targets, "pairwise_euclidean targets");
  if (queries.rows() != targets.rows())
    throw std::invalid_argument(
        "pairwise_euclidean: queries have dimension " +
        std::to_string(queries.rows()) + " but targets have " +
        std::to_string(targets.rows()));

  // |q - t|^2 = |q|^2 + |t|^2 - 2 q.t, clamped for roundoff near zero
  Eigen::MatrixXd sq = -2.0 * (queries.transpose() * targets);
  sq.colwise() += queries.colwise().squaredNorm().transpose();
  sq.rowwise() += targets.colwise().squaredNorm();
  DissimilarityMatrix out;
  out.values = sq.cwiseMax(0.0).cwiseSqrt();
  out.kind = DissimilarityKind::Euclidean;
  return out;
}

DissimilarityMatrix nicdm(const DissimilarityMatrix& dist, int k) {
  if (dist.kind != DissimilarityKind::Euclidean)
    throw std::invalid_argument("nicdm: input must be raw Euclidean distances");
  const Eigen::Index nq = dist.num_queries();
  const Eigen::Index nt = dist.num_targets();
  if (k < 1 || k > nt || k > nq)
    throw std::invalid_argument(
        "nicdm: k = " + std::to_string(k) + " out of range for " +
        std::to_string(nq) + " queries x " + std::to_string(nt) + " targets");

  Eigen::VectorXd row_scale(nq);
  Eigen::VectorXd col_scale(nt);
  std::vector<double> buf;
  for (Eigen::Index i = 0; i < nq; ++i) {
    buf.assign(dist.values.row(i).begin(), dist.values.row(i).end());
    row_scale(i) = mean_of_k_smallest(buf, k);
  }
  for (Eigen::Index j = 0; j < nt; ++j) {
    buf.assign(dist.values.col(j).begin(), dist.values.col(j).end());
    col_scale(j) = mean_of_k_smallest(buf, k);
  }
  if ((row_scale.array() <= 0.0).any() || (col_scale.array() <= 0.0).any())
    throw std::invalid_argument(
        "nicdm: zero local scale; input has coincident points");

  DissimilarityMatrix out;
  out.values = dist.values.array() /
               (row_scale * col_scale.transpose()).array().sqrt();
  out.kind = DissimilarityKind::Nicdm;
  return out;
}

std::vector<Ranking> rank_all(const DissimilarityMatrix& dist) {
  const Eigen::Index nq = dist.num_queries();
  const Eigen::Index nt = dist.num_targets();
  std::vector<Ranking> rankings(nq);
  std::vector<int> order(nt);
  for (Eigen::Index i = 0; i < nq; ++i) {
    std::iota(order.begin(), order.end(), 0);
    const auto row = dist.values.row(i);
    std::sort(order.begin(), order.end(), [&row](int a, int b) {
      if (row(a) != row(b)) return row(a) < row(b);
      return a < b;
    });
    Ranking& r = rankings[i];
    r.query = static_cast<int>(i);
    r.ordered.resize(nt);
    for (Eigen::Index j = 0; j < nt; ++j)
      r.ordered[j] = RankedTarget{order[j], row(order[j])};
  }
  return rankings;
}

}  // namespace zsl
