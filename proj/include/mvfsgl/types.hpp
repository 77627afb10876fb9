#pragma once

#include <Eigen/Dense>

namespace mvfsgl {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntVector = Eigen::VectorXi;

}  // namespace mvfsgl
