#pragma once

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

#include "mvfsgl/kmeans.hpp"
#include "mvfsgl/types.hpp"

namespace mvfsgl {

/// Rows of the normalized-cut embedding: eigenvectors of the c smallest
/// eigenvalues of L_sym = I - D^{-1/2} S_bar D^{-1/2}, row-normalized
/// (all-zero rows are left as zeros).
template <typename Scalar>
Matrix<Scalar> spectral_embedding(const Matrix<Scalar>& graph, int clusters) {
    const Index n = graph.rows();
    if (clusters < 1 || clusters > n) throw std::invalid_argument("spectral_embedding: bad cluster count");

    const Matrix<Scalar> sym = (graph + graph.transpose()) / Scalar(2);
    Vector<Scalar> degree = sym.rowwise().sum();
    for (Index i = 0; i < n; ++i)
        if (!(degree(i) > Scalar(0)))
            throw std::runtime_error("spectral_embedding: node " + std::to_string(i) +
                                     " has zero degree (disconnected)");

    const Vector<Scalar> inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    Matrix<Scalar> lap = -(inv_sqrt.asDiagonal() * sym * inv_sqrt.asDiagonal());
    lap.diagonal().array() += Scalar(1);

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(lap);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_embedding: eigendecomposition failed");
    Matrix<Scalar> embedding = solver.eigenvectors().leftCols(clusters);  // ascending eigenvalues
    for (Index i = 0; i < n; ++i) {
        const Scalar norm = embedding.row(i).norm();
        if (norm > Scalar(0)) embedding.row(i) /= norm;
    }
    return embedding;
}

/// Normalized-cut spectral clustering of a nonnegative similarity graph:
/// k-means over the row-normalized spectral embedding.
template <typename Scalar>
IntVector spectral_cluster(const Matrix<Scalar>& graph, int clusters, std::uint64_t seed,
                           int kmeans_restarts = 10) {
    const Matrix<Scalar> embedding = spectral_embedding(graph, clusters);
    const Matrix<Scalar> points = embedding.transpose();  // kmeans expects features x samples
    return kmeans(points, clusters, kmeans_restarts, seed).labels;
}

}  // namespace mvfsgl
