#include "zsl/regression.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace zsl {

const char* to_string(Direction direction) {
  return direction == Direction::SourceToTarget ? "source-to-target"
                                                : "target-to-source";
}

void require_finite(const DataMatrix& m, const std::string& name) {
  if (m.size() == 0)
    throw std::invalid_argument(name + ": matrix is empty");
  if (!m.allFinite())
    throw std::invalid_argument(name + ": matrix has NaN or Inf entries");
}

Centered center(const DataMatrix& data) {
  require_finite(data, "center");
  Centered out;
  out.mean = data.rowwise().mean();
  out.matrix = data.colwise() - out.mean;
  return out;
}

DataMatrix RidgeModel::predict(const DataMatrix& inputs) const {
  if (inputs.rows() != in_dim())
    throw std::invalid_argument(
        "predict: inputs have " + std::to_string(inputs.rows()) +
        " rows but the model expects " + std::to_string(in_dim()));
  DataMatrix shifted = inputs.colwise() - input_mean;
  DataMatrix out = projection * shifted;
  out.colwise() += output_mean;
  return out;
}

RidgeModel fit_ridge(const DataMatrix& observations, const DataMatrix& responses,
                     double lambda, const RidgeOptions& options) {
  require_finite(observations, "fit_ridge observations");
  require_finite(responses, "fit_ridge responses");
  if (observations.cols() != responses.cols())
    throw std::invalid_argument(
        "fit_ridge: observations and responses disagree on the number of "
        "objects (" + std::to_string(observations.cols()) + " vs " +
        std::to_string(responses.cols()) + ")");
  if (lambda < 0.0)
    throw std::invalid_argument("fit_ridge: lambda must be nonnegative");

  const Eigen::Index in_dim = observations.rows();
  const Eigen::Index out_dim = responses.rows();

  RidgeModel model;
  model.lambda = lambda;
  model.direction = options.direction;

  DataMatrix obs;
  DataMatrix resp;
  if (options.center) {
    Centered a = center(observations);
    Centered b = center(responses);
    obs = std::move(a.matrix);
    resp = std::move(b.matrix);
    model.input_mean = std::move(a.mean);
    model.output_mean = std::move(b.mean);
  } else {
    obs = observations;
    resp = responses;
    model.input_mean = Vector::Zero(in_dim);
    model.output_mean = Vector::Zero(out_dim);
  }

  if (lambda > 0.0) {
    DataMatrix gram = obs * obs.transpose();
    gram.diagonal().array() += lambda;
    // M = B A^T (A A^T + lambda I)^-1, solved as the transposed SPD system
    model.projection = gram.ldlt().solve(obs * resp.transpose()).transpose();
  } else {
    model.projection = resp * pseudo_inverse(obs);
  }
  return model;
}

double spectral_norm(const DataMatrix& m) {
  require_finite(m, "spectral_norm");
  // top eigenvalue of the smaller gram matrix; the symmetric QR solver keeps
  // the largest eigenvalue accurate to ~eps * sigma_max^2 even with repeated
  // singular values, where BDCSVD's deflation loses digits
  const DataMatrix gram = m.rows() <= m.cols()
                              ? DataMatrix(m * m.transpose())
                              : DataMatrix(m.transpose() * m);
  Eigen::SelfAdjointEigenSolver<DataMatrix> eigen(gram, Eigen::EigenvaluesOnly);
  const double top = eigen.eigenvalues().tail(1)(0);
  return std::sqrt(std::max(top, 0.0));
}

DataMatrix pseudo_inverse(const DataMatrix& m) {
  Eigen::JacobiSVD<DataMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(m.rows(), m.cols())) *
                        std::numeric_limits<double>::epsilon() *
                        (sv.size() > 0 ? sv(0) : 0.0);
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double ridge_objective(const DataMatrix& projection, const DataMatrix& observations,
                       const DataMatrix& responses, double lambda) {
  return (projection * observations - responses).squaredNorm() +
         lambda * projection.squaredNorm();
}

}  // namespace zsl
