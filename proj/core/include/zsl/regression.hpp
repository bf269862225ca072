#pragma once

#include "zsl/types.hpp"

namespace zsl {

struct Centered {
  DataMatrix matrix;  // per-row mean removed
  Vector mean;        // per-row empirical mean of the input
};

/// Removes the per-row mean. Adding `mean` back to every column reconstructs
/// the input exactly.
Centered center(const DataMatrix& data);

/// Linear map between two vector spaces fitted by fit_ridge. Immutable after
/// construction; safe to share across threads for predict.
struct RidgeModel {
  DataMatrix projection;  // out_dim x in_dim
  double lambda = 0.0;
  Direction direction = Direction::SourceToTarget;
  Vector input_mean;   // subtracted from inputs before projecting
  Vector output_mean;  // added back to projected outputs

  Eigen::Index in_dim() const { return projection.cols(); }
  Eigen::Index out_dim() const { return projection.rows(); }

  /// Column j of the result is projection * (inputs col j - input_mean)
  /// + output_mean.
  DataMatrix predict(const DataMatrix& inputs) const;
};

struct RidgeOptions {
  Direction direction = Direction::SourceToTarget;
  // When false the data is used as-is and the stored means are zero.
  bool center = true;
};

/// Closed-form minimizer of |M A - B|_F^2 + lambda |M|_F^2 over M, where A
/// holds the (centered) observations and B the responses, one object per
/// column. lambda > 0 solves the positive-definite normal equations; lambda
/// = 0 returns the minimum-norm least-squares solution via an SVD
/// pseudo-inverse, so rank-deficient observations are still well-defined.
RidgeModel fit_ridge(const DataMatrix& observations, const DataMatrix& responses,
                     double lambda, const RidgeOptions& options = {});

/// Largest singular value.
double spectral_norm(const DataMatrix& m);

/// Moore-Penrose pseudo-inverse with singular values below
/// max(rows, cols) * eps * sigma_max treated as zero.
DataMatrix pseudo_inverse(const DataMatrix& m);

/// |projection * observations - responses|_F^2 + lambda |projection|_F^2,
/// the quantity fit_ridge minimizes. Exposed for optimality checks.
double ridge_objective(const DataMatrix& projection, const DataMatrix& observations,
                       const DataMatrix& responses, double lambda);

}  // namespace zsl
