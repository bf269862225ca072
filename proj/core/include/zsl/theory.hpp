#pragma once

#include "zsl/types.hpp"

#include <cstdint>

namespace zsl {

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Parameters for the squared-distance gap experiment: targets are drawn
/// from N(0, s2 * I) in `dim` dimensions, conditioned so their squared norms
/// differ by gamma standard deviations of the squared-norm distribution;
/// queries are zero-mean isotropic normal with component variance query_s2.
struct DeltaParams {
  double gamma = 1.0;
  int dim = 1;
  double s2 = 1.0;        // component variance of the target distribution
  double query_s2 = 1.0;  // component variance of the query distribution
  int num_samples = 100000;
  std::uint64_t seed = 0;
};

/// Predicted gap between the expected squared distances from a zero-mean
/// query to the farther and nearer target: sqrt(2) * gamma * sqrt(dim) * s2.
double delta_closed_form(double gamma, int dim, double s2);

/// Empirical estimate of the same gap. Per sample, the near target is drawn
/// from N(0, s2 * I) and the far target is the same point rescaled so the
/// squared norms differ by exactly gamma * sqrt(2 * dim) * s2; the sample
/// value is |x - far|^2 - |x - near|^2 for a fresh query x. gamma = 0 makes
/// the two targets identical, so the estimate and its error are exactly 0.
MonteCarloEstimate delta_monte_carlo(const DeltaParams& params);

/// Empirical variance of |y|^2 over draws y ~ N(0, s2 * I); the identity
/// under test is Var[|y|^2] = 2 * dim * s2^2.
double squared_norm_variance_mc(int dim, double s2, int num_samples,
                                std::uint64_t seed);

/// Nearest-neighbor retention experiment: a dataset of standard normal
/// points, an anchor picked from it, and two probes placed at the same
/// distance `radius` from the anchor but at different norms. Probability
/// that the anchor stays the probe's nearest neighbor is estimated for each
/// probe norm separately (the two norm constraints are generally not
/// satisfiable against a shared anchor).
struct BallExperimentParams {
  int dim = 2;
  int num_dataset = 100;
  double radius = 0.5;
  double norm1 = 0.5;  // must be < norm2
  double norm2 = 2.5;
  int num_trials = 10000;
  std::uint64_t seed = 0;
};

struct BallExperimentResult {
  double p1 = 0.0;  // anchor nearest to the low-norm probe
  double p2 = 0.0;  // anchor nearest to the high-norm probe
  int num_trials = 0;
  double pooled_std_error = 0.0;
};

BallExperimentResult ball_experiment(const BallExperimentParams& params);

/// Hubness comparison of two query/target variance assignments in the same
/// space: one run draws queries from N(0, s1^2 I) and targets from
/// N(0, s2^2 I), the other swaps the two. Reports the k-occurrence skewness
/// of the Euclidean rankings for both runs.
struct TwoConfigParams {
  int dim = 300;
  double s1 = 1.0;  // smaller standard deviation, must be <= s2
  double s2 = 2.0;
  int num_queries = 1000;
  int num_targets = 1000;
  int k = 10;
  std::uint64_t seed = 0;
};

struct TwoConfigResult {
  double skew_narrow_queries = 0.0;  // queries ~ s1, targets ~ s2
  double skew_wide_queries = 0.0;    // queries ~ s2, targets ~ s1
};

TwoConfigResult two_config_experiment(const TwoConfigParams& params);

}  // namespace zsl
