#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvfsgl/dataset.hpp"
#include "mvfsgl/parallel.hpp"
#include "mvfsgl/types.hpp"

namespace mvfsgl {

enum class AffinityMode {
    row_scaled,  // every row sums to the view count; generally asymmetric
    symmetric,   // exactly symmetric; total mass equals n * view count
};

inline const char* to_string(AffinityMode mode) {
    return mode == AffinityMode::row_scaled ? "row" : "sym";
}

template <typename Scalar = double>
struct AffinityGraph {
    Matrix<Scalar> matrix;
    AffinityMode mode = AffinityMode::row_scaled;
    Scalar kernel_width = Scalar(0);
};

/// Squared Euclidean distances between the columns of X, clamped at zero.
template <typename Derived>
Matrix<typename Derived::Scalar> pairwise_sq_distances(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    const Vector<Scalar> sq = x.colwise().squaredNorm().transpose();
    Matrix<Scalar> d2 = sq.replicate(1, x.cols());
    d2 += sq.transpose().replicate(x.cols(), 1);
    d2.noalias() -= Scalar(2) * (x.transpose() * x);
    d2 = d2.cwiseMax(Scalar(0));
    d2.diagonal().setZero();
    return d2;
}

/// Median Euclidean distance over distinct sample pairs. For n > 4000 the
/// median is estimated from a fixed-seed subsample of 2e6 pairs.
template <typename Scalar>
Scalar median_pairwise_distance(const Matrix<Scalar>& d2) {
    const Index n = d2.rows();
    std::vector<Scalar> dist;
    if (n <= 4000) {
        dist.reserve(static_cast<size_t>(n) * (n - 1) / 2);
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) dist.push_back(std::sqrt(d2(i, j)));
    } else {
        std::mt19937_64 rng(0x6d766673u);  // fixed: estimate must be reproducible
        std::uniform_int_distribution<Index> pick(0, n - 1);
        const size_t samples = 2'000'000;
        dist.reserve(samples);
        while (dist.size() < samples) {
            const Index i = pick(rng), j = pick(rng);
            if (i != j) dist.push_back(std::sqrt(d2(i, j)));
        }
    }
    std::sort(dist.begin(), dist.end());
    const size_t k = dist.size();
    if (k % 2 == 1) return dist[k / 2];
    return (dist[k / 2 - 1] + dist[k / 2]) / Scalar(2);
}

/// Gaussian-kernel affinity restricted to mutual K-nearest-neighborhoods:
/// entry (i,j) is exp(-||x_i - x_j||^2 / (2 sigma^2)) when i is among the K
/// nearest neighbors of j or vice versa, else 0. The kernel width sigma is
/// the median pairwise distance. Symmetric with a zero diagonal.
template <typename Scalar>
Matrix<Scalar> knn_gaussian_affinity(const Matrix<Scalar>& x, int k, Scalar* kernel_width = nullptr) {
    const Index n = x.cols();
    if (k < 1 || k >= n) throw std::invalid_argument("knn_gaussian_affinity: need 1 <= K < n");

    const Matrix<Scalar> d2 = pairwise_sq_distances(x);
    const Scalar sigma = median_pairwise_distance(d2);
    if (!(sigma > Scalar(0)))
        throw std::runtime_error("knn_gaussian_affinity: degenerate view, median pairwise distance is zero");
    if (kernel_width) *kernel_width = sigma;

    // K nearest neighbors per column, ties broken by smaller sample index.
    Matrix<Scalar> raw = Matrix<Scalar>::Zero(n, n);
    std::vector<Index> order(static_cast<size_t>(n - 1));
    const Scalar inv = Scalar(1) / (Scalar(2) * sigma * sigma);
    for (Index j = 0; j < n; ++j) {
        Index at = 0;
        for (Index i = 0; i < n; ++i)
            if (i != j) order[static_cast<size_t>(at++)] = i;
        std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
            if (d2(a, j) != d2(b, j)) return d2(a, j) < d2(b, j);
            return a < b;
        });
        for (int t = 0; t < k; ++t) {
            const Index i = order[static_cast<size_t>(t)];
            const Scalar w = std::exp(-d2(i, j) * inv);
            raw(i, j) = w;
            raw(j, i) = w;
        }
    }
    return raw;
}

/// Rescales a raw affinity for fusion across `views` graphs.
template <typename Scalar>
AffinityGraph<Scalar> scale_affinity(const Matrix<Scalar>& raw, int views, AffinityMode mode,
                                     Scalar kernel_width = Scalar(0)) {
    if (views < 1) throw std::invalid_argument("scale_affinity: need at least one view");
    AffinityGraph<Scalar> graph;
    graph.mode = mode;
    graph.kernel_width = kernel_width;
    if (mode == AffinityMode::row_scaled) {
        graph.matrix = raw;
        for (Index i = 0; i < raw.rows(); ++i) {
            const Scalar sum = raw.row(i).sum();
            if (!(sum > Scalar(0)))
                throw std::runtime_error("scale_affinity: isolated sample " + std::to_string(i) +
                                         " (zero affinity row)");
            graph.matrix.row(i) *= Scalar(views) / sum;
        }
    } else {
        Matrix<Scalar> sym = (raw + raw.transpose()) / Scalar(2);
        const Scalar total = sym.sum();
        if (!(total > Scalar(0))) throw std::runtime_error("scale_affinity: graph has no mass");
        graph.matrix = sym * (Scalar(raw.rows()) * Scalar(views) / total);
    }
    return graph;
}

/// Per-view affinity graphs for a dataset; views are processed in parallel.
template <typename Scalar>
std::vector<AffinityGraph<Scalar>> build_affinities(const MultiViewDataset<Scalar>& ds, int k,
                                                    AffinityMode mode) {
    std::vector<AffinityGraph<Scalar>> graphs(ds.views.size());
    parallel_for(ds.view_count(), [&](int v) {
        try {
            Scalar sigma = 0;
            const Matrix<Scalar> raw = knn_gaussian_affinity(ds.views[static_cast<size_t>(v)], k, &sigma);
            graphs[static_cast<size_t>(v)] = scale_affinity(raw, ds.view_count(), mode, sigma);
        } catch (const std::exception& e) {
            const std::string name = v < static_cast<int>(ds.view_names.size())
                                         ? ds.view_names[static_cast<size_t>(v)]
                                         : std::to_string(v + 1);
            throw std::runtime_error("view " + name + ": " + e.what());
        }
    });
    return graphs;
}

}  // namespace mvfsgl
