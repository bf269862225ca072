#pragma once

#include <Eigen/Dense>

#include <string>

namespace zsl {

// Dense real matrix holding one object per column and one feature dimension
// per row. All public entry points expect finite entries.
using DataMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Which space a fitted projection maps into.
enum class Direction { SourceToTarget, TargetToSource };

const char* to_string(Direction direction);

// Throws std::invalid_argument if m is empty or has NaN/Inf entries.
void require_finite(const DataMatrix& m, const std::string& name);

}  // namespace zsl
