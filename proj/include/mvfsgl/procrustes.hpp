#pragma once

#include <Eigen/SVD>
#include <stdexcept>

#include "mvfsgl/types.hpp"

namespace mvfsgl {

/// Closed-form solution of the orthogonal Procrustes problem: for an a x b
/// matrix M with a >= b, returns the a x b matrix Q with orthonormal columns
/// maximizing Tr(Q^T M). Computed from the thin SVD M = U S V^T as Q = U V^T.
/// When M is rank deficient the maximizer is not unique; any is returned.
template <typename Derived>
Matrix<typename Derived::Scalar> solve_procrustes(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() < m.cols()) throw std::invalid_argument("solve_procrustes: need rows >= cols");
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace mvfsgl
