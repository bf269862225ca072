#include "zsl/regression.hpp"

#include "zsl/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using zsl::center;
using zsl::DataMatrix;
using zsl::Direction;
using zsl::fit_ridge;
using zsl::pseudo_inverse;
using zsl::ridge_objective;
using zsl::RidgeOptions;
using zsl::Rng;
using zsl::spectral_norm;

namespace {

const RidgeOptions kNoCenter{Direction::SourceToTarget, false};

DataMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  DataMatrix m(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("regression");

TEST_CASE("center removes per-row means and is reversible") {
  SUBCASE("symmetric pair") {
    const auto c = center(from_rows({{1.0, 3.0}}));
    CHECK(c.matrix(0, 0) == doctest::Approx(-1.0));
    CHECK(c.matrix(0, 1) == doctest::Approx(1.0));
    CHECK(c.mean(0) == doctest::Approx(2.0));
  }
  SUBCASE("already centered input is unchanged") {
    const DataMatrix m = from_rows({{-1.0, 1.0}, {2.0, -2.0}});
    const auto c = center(m);
    CHECK((c.matrix - m).norm() == 0.0);
    CHECK(c.mean.norm() == 0.0);
  }
  SUBCASE("hand-computed row means") {
    const auto c = center(from_rows({{1.0, 2.0, 3.0}, {4.0, 4.0, 4.0}}));
    CHECK((c.matrix - from_rows({{-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}})).norm() ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.mean(0) == doctest::Approx(2.0));
    CHECK(c.mean(1) == doctest::Approx(4.0));
  }
  SUBCASE("row means vanish and adding the mean back reconstructs") {
    Rng rng(902);
    const DataMatrix m = rng.normal_matrix(6, 17).array() + 3.5;
    const auto c = center(m);
    CHECK(c.matrix.rowwise().mean().cwiseAbs().maxCoeff() < 1e-12);
    const DataMatrix back = c.matrix.colwise() + c.mean;
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("fit_ridge closed forms on tiny systems") {
  SUBCASE("lambda 0 with identity observations copies the responses") {
    const DataMatrix a = DataMatrix::Identity(2, 2);
    const DataMatrix b = from_rows({{2.0, 0.0}, {0.0, 2.0}});
    const auto model = fit_ridge(a, b, 0.0, kNoCenter);
    CHECK((model.projection - b).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("scalar ridge matches the line-search minimizer") {
    const DataMatrix one = from_rows({{1.0}});
    const auto model = fit_ridge(one, one, 1.0, kNoCenter);
    CHECK(model.projection(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

    // independent oracle: scan (m - 1)^2 + m^2 for the minimizer
    double best_m = 0.0, best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      const double m = i / 2000.0;
      const double val = (m - 1.0) * (m - 1.0) + m * m;
      if (val < best_val) {
        best_val = val;
        best_m = m;
      }
    }
    CHECK(std::abs(model.projection(0, 0) - best_m) <= 5e-4);
  }
  SUBCASE("lambda 0 on a square invertible system reproduces the responses") {
    Rng rng(17);
    const DataMatrix a = rng.normal_matrix(6, 6);
    const DataMatrix b = rng.normal_matrix(4, 6);
    const auto model = fit_ridge(a, b, 0.0, kNoCenter);
    CHECK((model.projection * a - b).norm() / b.norm() < 1e-8);
  }
}

TEST_CASE("fit_ridge rejects invalid input") {
  const DataMatrix a = DataMatrix::Identity(2, 2);
  CHECK_THROWS_AS(fit_ridge(a, DataMatrix::Identity(2, 3), 1.0, kNoCenter),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_ridge(a, a, -0.5, kNoCenter), std::invalid_argument);
  DataMatrix bad = a;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_ridge(bad, a, 1.0, kNoCenter), std::invalid_argument);
}

TEST_CASE("mapped observations never exceed the responses in spectral norm") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int c = rng.uniform_int(2, 8);
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(5, 30);
    const DataMatrix a = rng.normal_matrix(c, n);
    const DataMatrix b = rng.normal_matrix(d, n);
    for (double lambda : {0.0, 1e-3, 0.1, 1.0, 100.0}) {
      const auto model = fit_ridge(a, b, lambda, kNoCenter);
      CHECK(spectral_norm(model.projection * a) <=
            spectral_norm(b) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("shrinkage also holds through the centering path") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const DataMatrix a = rng.normal_matrix(5, 20).array() + 1.5;
    const DataMatrix b = rng.normal_matrix(4, 20).array() - 0.5;
    const double lambda = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const auto model = fit_ridge(a, b, lambda);
    const DataMatrix a_centered = center(a).matrix;
    const DataMatrix b_centered = center(b).matrix;
    CHECK(spectral_norm(model.projection * a_centered) <=
          spectral_norm(b_centered) * (1.0 + 1e-10));
  }
}

TEST_CASE("projected gram norm equals the top singular value shrinkage") {
  Rng rng(31);
  const DataMatrix a = rng.normal_matrix(5, 20);
  const double sigma = spectral_norm(a);
  for (double lambda : {1e-3, 0.1, 1.0, 1e3}) {
    DataMatrix gram = a * a.transpose();
    gram.diagonal().array() += lambda;
    const DataMatrix projected = a.transpose() * gram.ldlt().solve(a);
    const double expected = sigma * sigma / (sigma * sigma + lambda);
    CHECK(spectral_norm(projected) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(spectral_norm(projected) <= 1.0 + 1e-12);
  }
}

TEST_CASE("finite-difference gradient vanishes at the fitted projection") {
  Rng rng(47);
  const double h = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    const DataMatrix a = rng.normal_matrix(3, 12);
    const DataMatrix b = rng.normal_matrix(4, 12);
    const double lambda = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const auto model = fit_ridge(a, b, lambda, kNoCenter);
    double max_grad = 0.0;
    DataMatrix probe = model.projection;
    for (Eigen::Index i = 0; i < probe.rows(); ++i) {
      for (Eigen::Index j = 0; j < probe.cols(); ++j) {
        const double saved = probe(i, j);
        probe(i, j) = saved + h;
        const double up = ridge_objective(probe, a, b, lambda);
        probe(i, j) = saved - h;
        const double down = ridge_objective(probe, a, b, lambda);
        probe(i, j) = saved;
        max_grad = std::max(max_grad, std::abs(up - down) / (2.0 * h));
      }
    }
    CHECK(max_grad <= 1e-5);
  }
}

TEST_CASE("penalty monotonicity: larger lambda never grows the projection") {
  Rng rng(59);
  const DataMatrix a = rng.normal_matrix(4, 15);
  const DataMatrix b = rng.normal_matrix(3, 15);
  double previous = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.01, 0.1, 1.0, 10.0, 1000.0}) {
    const double norm = fit_ridge(a, b, lambda, kNoCenter).projection.norm();
    CHECK(norm <= previous * (1.0 + 1e-12));
    previous = norm;
  }
}

TEST_CASE("centering path equals fitting pre-centered data") {
  Rng rng(61);
  const DataMatrix a = rng.normal_matrix(4, 20).array() + 2.0;
  const DataMatrix b = rng.normal_matrix(3, 20).array() - 1.0;
  const auto ca = center(a);
  const auto cb = center(b);
  const auto direct = fit_ridge(ca.matrix, cb.matrix, 0.7, kNoCenter);
  const auto centered = fit_ridge(a, b, 0.7);
  CHECK((direct.projection - centered.projection).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((centered.input_mean - ca.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((centered.output_mean - cb.mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("predict") {
  SUBCASE("the input mean maps to the output mean") {
    Rng rng(67);
    const DataMatrix a = rng.normal_matrix(4, 10).array() + 1.0;
    const DataMatrix b = rng.normal_matrix(2, 10).array() + 5.0;
    const auto model = fit_ridge(a, b, 0.5);
    const auto out = model.predict(model.input_mean);
    CHECK((out.col(0) - model.output_mean).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("identity fit doubles the input") {
    const DataMatrix a = DataMatrix::Identity(2, 2);
    const auto model = fit_ridge(a, 2.0 * a, 0.0, kNoCenter);
    DataMatrix in(2, 1);
    in << 1.0, 0.0;
    const auto out = model.predict(in);
    CHECK(out(0, 0) == doctest::Approx(2.0));
    CHECK(out(1, 0) == doctest::Approx(0.0));
  }
  SUBCASE("scalar multiply with zero means") {
    zsl::RidgeModel model;
    model.projection = from_rows({{0.5}});
    model.input_mean = zsl::Vector::Zero(1);
    model.output_mean = zsl::Vector::Zero(1);
    DataMatrix in(1, 1);
    in << 4.0;
    CHECK(model.predict(in)(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("dimension mismatch throws") {
    const auto model =
        fit_ridge(DataMatrix::Identity(2, 2), DataMatrix::Identity(2, 2), 1.0);
    CHECK_THROWS_AS(model.predict(DataMatrix::Identity(3, 3)),
                    std::invalid_argument);
  }
}

TEST_CASE("spectral_norm known values") {
  CHECK(spectral_norm(DataMatrix::Identity(3, 3)) == doctest::Approx(1.0));
  DataMatrix diag = DataMatrix::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  CHECK(spectral_norm(diag) == doctest::Approx(3.0));
  const DataMatrix nilpotent = from_rows({{0.0, 2.0}, {0.0, 0.0}});
  CHECK(spectral_norm(nilpotent) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("pseudo_inverse yields the minimum-norm solution on rank deficiency") {
  Rng rng(71);
  DataMatrix a(3, 8);
  a.row(0) = rng.normal_matrix(1, 8);
  a.row(1) = 2.0 * a.row(0);  // rank 2 at most
  a.row(2) = rng.normal_matrix(1, 8);
  const DataMatrix b = rng.normal_matrix(2, 8);
  const auto model = fit_ridge(a, b, 0.0, kNoCenter);
  // any minimizer satisfies the normal equations M (A A^T) = B A^T
  const DataMatrix residual =
      model.projection * (a * a.transpose()) - b * a.transpose();
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);
  // and the pseudo-inverse solution is no larger than a perturbed minimizer
  const DataMatrix pinv_a = pseudo_inverse(a);
  CHECK((pinv_a * a * pinv_a - pinv_a).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_SUITE_END();
