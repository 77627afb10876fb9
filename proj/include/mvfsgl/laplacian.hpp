#pragma once

#include "mvfsgl/types.hpp"

namespace mvfsgl {

/// Graph Laplacian L = P - S_bar of the symmetrized graph
/// S_bar = (S + S^T)/2, with P the diagonal degree matrix. L has zero row
/// sums and is positive semidefinite whenever S is entrywise nonnegative.
template <typename Scalar = double>
struct GraphLaplacian {
    Matrix<Scalar> s_bar;
    Vector<Scalar> degree;  // diagonal of P
    Matrix<Scalar> matrix;  // L
};

template <typename Derived>
GraphLaplacian<typename Derived::Scalar> laplacian(const Eigen::MatrixBase<Derived>& s) {
    using Scalar = typename Derived::Scalar;
    GraphLaplacian<Scalar> out;
    out.s_bar = (s + s.transpose()) / Scalar(2);
    out.degree = out.s_bar.rowwise().sum();
    out.matrix = -out.s_bar;
    out.matrix.diagonal() += out.degree;
    return out;
}

}  // namespace mvfsgl
