#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace zsl {

/// Deterministic splitmix64 generator. Every randomized operation in the
/// library takes an explicit seed and draws from one of these, so results are
/// reproducible bit-for-bit across runs. Independent streams are derived from
/// (seed, stream) pairs, which keeps per-trial sequences independent of
/// execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream `stream` of the generator family identified by `seed`.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double next_double();

  double uniform(double lo, double hi);

  /// Inclusive bounds. Range must be small against 2^64.
  int uniform_int(int lo, int hi);

  /// Standard normal via Box-Muller; scale by hand where needed.
  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index n, double stddev = 1.0);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols,
                                double stddev = 1.0);
  Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols,
                                 double lo, double hi);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace zsl
