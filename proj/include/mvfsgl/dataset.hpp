#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvfsgl/csv.hpp"
#include "mvfsgl/types.hpp"

namespace mvfsgl {

/// A set of feature matrices over the same samples. Each view is
/// features x samples; all views share the sample count.
template <typename Scalar = double>
struct MultiViewDataset {
    std::vector<Matrix<Scalar>> views;
    IntVector labels;  // empty when no ground truth is attached
    std::vector<std::string> view_names;

    Index sample_count() const { return views.empty() ? 0 : views.front().cols(); }
    int view_count() const { return static_cast<int>(views.size()); }
    bool has_labels() const { return labels.size() > 0; }
};

template <typename Scalar = double>
MultiViewDataset<Scalar> load_dataset(const std::vector<std::string>& view_paths,
                                      const std::string& label_path = {},
                                      bool skip_header = false, bool transpose = false) {
    if (view_paths.empty()) throw std::invalid_argument("load_dataset: no view files given");
    MultiViewDataset<Scalar> ds;
    for (const auto& path : view_paths) {
        Matrix<Scalar> view = load_matrix_csv<Scalar>(path, skip_header, transpose);
        if (!ds.views.empty() && view.cols() != ds.sample_count())
            throw std::runtime_error(path + ": has " + std::to_string(view.cols()) +
                                     " samples but " + view_paths.front() + " has " +
                                     std::to_string(ds.sample_count()));
        ds.views.push_back(std::move(view));
        ds.view_names.push_back(path);
    }
    if (ds.sample_count() < 2) throw std::runtime_error(view_paths.front() + ": fewer than 2 samples");
    if (!label_path.empty()) {
        ds.labels = load_labels_csv(label_path);
        if (ds.labels.size() != ds.sample_count())
            throw std::runtime_error(label_path + ": " + std::to_string(ds.labels.size()) +
                                     " labels for " + std::to_string(ds.sample_count()) + " samples");
    }
    return ds;
}

/// Rescales every feature (row) of every view to [0, 1]. Constant features
/// map to all zeros. Idempotent.
template <typename Scalar>
MultiViewDataset<Scalar> minmax_normalize(const MultiViewDataset<Scalar>& ds) {
    MultiViewDataset<Scalar> out = ds;
    for (auto& view : out.views) {
        for (Index i = 0; i < view.rows(); ++i) {
            const Scalar lo = view.row(i).minCoeff();
            const Scalar hi = view.row(i).maxCoeff();
            const Scalar span = hi - lo;
            if (span > Scalar(0))
                view.row(i) = (view.row(i).array() - lo) / span;
            else
                view.row(i).setZero();
        }
    }
    return out;
}

/// Stacks the views' feature rows into one (sum of m_v) x n matrix.
template <typename Scalar>
Matrix<Scalar> concatenate_views(const MultiViewDataset<Scalar>& ds) {
    Index total = 0;
    for (const auto& view : ds.views) total += view.rows();
    Matrix<Scalar> stacked(total, ds.sample_count());
    Index row = 0;
    for (const auto& view : ds.views) {
        stacked.middleRows(row, view.rows()) = view;
        row += view.rows();
    }
    return stacked;
}

/// Synthetic clustered multi-view data for tests and demos.
///
/// Per view, the first `informative` feature rows carry the cluster signal:
/// cluster centers sit on a deterministic lattice scaled by `separation`
/// and samples get unit-variance Gaussian noise around their center. The
/// remaining `noisy` rows are i.i.d. uniform on [0, 1). Cluster sizes are as
/// equal as possible; sample order is shuffled. Deterministic per seed.
template <typename Scalar = double>
MultiViewDataset<Scalar> make_blobs_multiview(Index n, int clusters, int views, int informative,
                                              int noisy, Scalar separation, std::uint64_t seed) {
    if (clusters < 2 || n < clusters) throw std::invalid_argument("make_blobs_multiview: need n >= clusters >= 2");
    if (views < 1) throw std::invalid_argument("make_blobs_multiview: need at least one view");
    if (informative < 1 || noisy < 0) throw std::invalid_argument("make_blobs_multiview: bad feature counts");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    IntVector labels(n);
    {
        std::vector<int> order(static_cast<size_t>(n));
        Index at = 0;
        for (int k = 0; k < clusters; ++k) {
            const Index size = n / clusters + (k < static_cast<int>(n % clusters) ? 1 : 0);
            for (Index j = 0; j < size; ++j) order[static_cast<size_t>(at++)] = k;
        }
        std::shuffle(order.begin(), order.end(), rng);
        for (Index i = 0; i < n; ++i) labels[i] = order[static_cast<size_t>(i)];
    }

    MultiViewDataset<Scalar> ds;
    ds.labels = labels;
    for (int v = 0; v < views; ++v) {
        const Index m = informative + noisy;
        Matrix<Scalar> view(m, n);
        // Lattice centers: feature f of cluster k sits at separation * ((f+k) mod c) / (c-1),
        // so any two clusters differ in every block of c consecutive features.
        Matrix<Scalar> centers(informative, clusters);
        for (Index f = 0; f < informative; ++f)
            for (int k = 0; k < clusters; ++k)
                centers(f, k) = separation * Scalar((f + k) % clusters) / Scalar(clusters - 1);
        for (Index i = 0; i < n; ++i)
            for (Index f = 0; f < informative; ++f)
                view(f, i) = centers(f, labels[i]) + static_cast<Scalar>(gauss(rng));
        for (Index f = informative; f < m; ++f)
            for (Index i = 0; i < n; ++i) view(f, i) = static_cast<Scalar>(unif(rng));
        ds.views.push_back(std::move(view));
        ds.view_names.push_back("view" + std::to_string(v + 1));
    }
    return ds;
}

}  // namespace mvfsgl
