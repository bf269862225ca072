#include "zsl/theory.hpp"

#include "zsl/hubness.hpp"
#include "zsl/neighbors.hpp"
#include "zsl/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zsl {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0))
    throw std::invalid_argument(std::string(name) + " must be positive");
}

// Accumulates mean and variance in one pass (Welford).
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / n_;
    m2_ += delta * (x - mean_);
  }
  long long count() const { return n_; }
  double mean() const { return mean_; }
  double sample_variance() const { return n_ > 1 ? m2_ / (n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 0 ? std::sqrt(sample_variance() / n_) : 0.0;
  }

 private:
  long long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace

double delta_closed_form(double gamma, int dim, double s2) {
  if (dim < 1) throw std::invalid_argument("delta_closed_form: dim must be >= 1");
  require_positive(s2, "delta_closed_form: s2");
  return std::sqrt(2.0) * gamma * std::sqrt(static_cast<double>(dim)) * s2;
}

MonteCarloEstimate delta_monte_carlo(const DeltaParams& params) {
  if (params.dim < 1) throw std::invalid_argument("delta_monte_carlo: dim must be >= 1");
  require_positive(params.s2, "delta_monte_carlo: s2");
  require_positive(params.query_s2, "delta_monte_carlo: query_s2");
  if (params.num_samples < 1)
    throw std::invalid_argument("delta_monte_carlo: num_samples must be >= 1");

  const double squared_norm_sd =
      std::sqrt(2.0 * params.dim) * params.s2;  // sd of |y|^2 under N(0, s2 I)
  const double gap = params.gamma * squared_norm_sd;
  const double target_sd = std::sqrt(params.s2);
  const double query_sd = std::sqrt(params.query_s2);

  Rng rng = Rng::derive(params.seed, 0x64656c74);
  RunningMoments moments;
  Eigen::VectorXd near(params.dim), far(params.dim), query(params.dim);
  for (int s = 0; s < params.num_samples; ++s) {
    double near_sq = 0.0;
    do {
      near = rng.normal_vector(params.dim, target_sd);
      near_sq = near.squaredNorm();
    } while (near_sq + gap < 0.0 || near_sq == 0.0);
    far = near * std::sqrt((near_sq + gap) / near_sq);
    query = rng.normal_vector(params.dim, query_sd);
    moments.add((query - far).squaredNorm() - (query - near).squaredNorm());
  }
  return MonteCarloEstimate{moments.mean(), moments.std_error()};
}

double squared_norm_variance_mc(int dim, double s2, int num_samples,
                                std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("squared_norm_variance_mc: dim must be >= 1");
  require_positive(s2, "squared_norm_variance_mc: s2");
  if (num_samples < 2)
    throw std::invalid_argument("squared_norm_variance_mc: need >= 2 samples");

  const double sd = std::sqrt(s2);
  Rng rng = Rng::derive(seed, 0x6e6f726d);
  RunningMoments moments;
  for (int s = 0; s < num_samples; ++s)
    moments.add(rng.normal_vector(dim, sd).squaredNorm());
  return moments.sample_variance();
}

namespace {

// Point with the requested norm at distance `radius` from `anchor`, uniform
// over the feasible sphere intersection. Returns false when the two spheres
// do not intersect.
bool place_probe(const Eigen::VectorXd& anchor, double radius, double norm,
                 Rng& rng, Eigen::VectorXd& probe) {
  const double anchor_norm = anchor.norm();
  if (anchor_norm == 0.0) return false;
  if (std::abs(norm - anchor_norm) > radius || radius > norm + anchor_norm)
    return false;

  // component along the anchor direction fixed by the two constraints
  const double along =
      (anchor_norm * anchor_norm + norm * norm - radius * radius) /
      (2.0 * anchor_norm);
  const double across_sq = norm * norm - along * along;
  const double across = std::sqrt(std::max(across_sq, 0.0));

  const Eigen::VectorXd axis = anchor / anchor_norm;
  Eigen::VectorXd ortho;
  double ortho_norm = 0.0;
  do {
    ortho = rng.normal_vector(anchor.size());
    ortho -= axis.dot(ortho) * axis;
    ortho_norm = ortho.norm();
  } while (ortho_norm == 0.0);
  probe = along * axis + (across / ortho_norm) * ortho;
  return true;
}

}  // namespace

BallExperimentResult ball_experiment(const BallExperimentParams& params) {
  if (params.dim < 2)
    throw std::invalid_argument("ball_experiment: dim must be >= 2");
  if (params.num_dataset < 1 || params.num_trials < 1)
    throw std::invalid_argument("ball_experiment: counts must be positive");
  require_positive(params.radius, "ball_experiment: radius");
  if (!(params.norm1 < params.norm2))
    throw std::invalid_argument("ball_experiment: norm1 must be < norm2");

  constexpr int kMaxAttemptsPerTrial = 100000;
  const double norms[2] = {params.norm1, params.norm2};
  double hits[2] = {0.0, 0.0};

  Eigen::VectorXd probe;
  for (int side = 0; side < 2; ++side) {
    for (int trial = 0; trial < params.num_trials; ++trial) {
      Rng rng = Rng::derive(params.seed,
                            2ULL * static_cast<std::uint64_t>(trial) + side);
      int attempts = 0;
      for (;;) {
        if (++attempts > kMaxAttemptsPerTrial)
          throw std::runtime_error(
              "ball_experiment: no feasible anchor for probe norm " +
              std::to_string(norms[side]) + " at radius " +
              std::to_string(params.radius));
        Eigen::MatrixXd dataset =
            rng.normal_matrix(params.dim, params.num_dataset);
        const int pick = rng.uniform_int(0, params.num_dataset - 1);
        if (!place_probe(dataset.col(pick), params.radius, norms[side], rng,
                         probe))
          continue;  // resample the trial; the geometry was infeasible
        bool anchor_nearest = true;
        const double anchor_dist_sq = params.radius * params.radius;
        for (int j = 0; j < params.num_dataset && anchor_nearest; ++j) {
          if (j == pick) continue;
          if ((dataset.col(j) - probe).squaredNorm() < anchor_dist_sq)
            anchor_nearest = false;
        }
        hits[side] += anchor_nearest ? 1.0 : 0.0;
        break;
      }
    }
  }

  BallExperimentResult result;
  result.num_trials = params.num_trials;
  result.p1 = hits[0] / params.num_trials;
  result.p2 = hits[1] / params.num_trials;
  const double n = static_cast<double>(params.num_trials);
  result.pooled_std_error = std::sqrt(result.p1 * (1.0 - result.p1) / n +
                                      result.p2 * (1.0 - result.p2) / n);
  return result;
}

TwoConfigResult two_config_experiment(const TwoConfigParams& params) {
  if (!(params.s1 <= params.s2))
    throw std::invalid_argument("two_config_experiment: s1 must be <= s2");
  if (params.k < 1 || params.k > params.num_targets)
    throw std::invalid_argument("two_config_experiment: k out of range");
  if (params.dim < 1 || params.num_queries < 1)
    throw std::invalid_argument("two_config_experiment: bad sizes");

  const auto run = [&params](double query_sd, double target_sd,
                             std::uint64_t stream) {
    Rng qrng = Rng::derive(params.seed, stream);
    Rng trng = Rng::derive(params.seed, stream + 1);
    const Eigen::MatrixXd queries =
        qrng.normal_matrix(params.dim, params.num_queries, query_sd);
    const Eigen::MatrixXd targets =
        trng.normal_matrix(params.dim, params.num_targets, target_sd);
    const auto rankings = rank_all(pairwise_euclidean(queries, targets));
    return hubness_report(rankings, params.k, params.num_targets).skewness;
  };

  TwoConfigResult result;
  result.skew_narrow_queries = run(params.s1, params.s2, 0);
  result.skew_wide_queries = run(params.s2, params.s1, 2);
  return result;
}

}  // namespace zsl
