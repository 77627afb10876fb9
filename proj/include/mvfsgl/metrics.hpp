#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "mvfsgl/types.hpp"

namespace mvfsgl {

struct ContingencyTable {
    Eigen::MatrixXi counts;  // predicted clusters x true classes
    int total = 0;
};

inline ContingencyTable contingency_table(const IntVector& pred, const IntVector& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("contingency_table: label vectors differ in length");
    if (pred.size() == 0) throw std::invalid_argument("contingency_table: empty labels");

    // compact ids in sorted label order, so arbitrary label values are fine
    std::map<int, int> pred_ids, truth_ids;
    for (Index i = 0; i < pred.size(); ++i) {
        pred_ids.emplace(pred(i), 0);
        truth_ids.emplace(truth(i), 0);
    }
    int next = 0;
    for (auto& [label, id] : pred_ids) id = next++;
    next = 0;
    for (auto& [label, id] : truth_ids) id = next++;

    ContingencyTable table;
    table.total = static_cast<int>(pred.size());
    table.counts = Eigen::MatrixXi::Zero(static_cast<Index>(pred_ids.size()),
                                         static_cast<Index>(truth_ids.size()));
    for (Index i = 0; i < pred.size(); ++i)
        ++table.counts(pred_ids.at(pred(i)), truth_ids.at(truth(i)));
    return table;
}

/// Normalized mutual information with the geometric-mean convention:
/// I(pred; truth) / sqrt(H(pred) H(truth)), natural logarithm, 0 log 0 = 0.
/// Two single-cluster partitions count as identical (1); otherwise a zero
/// entropy yields 0.
inline double nmi(const IntVector& pred, const IntVector& truth) {
    const ContingencyTable table = contingency_table(pred, truth);
    const double n = table.total;
    const Eigen::VectorXi pred_sizes = table.counts.rowwise().sum();
    const Eigen::VectorXi truth_sizes = table.counts.colwise().sum();

    const auto entropy = [n](const Eigen::VectorXi& sizes) {
        double h = 0;
        for (Index i = 0; i < sizes.size(); ++i)
            if (sizes(i) > 0) {
                const double p = sizes(i) / n;
                h -= p * std::log(p);
            }
        return h;
    };
    const double h_pred = entropy(pred_sizes);
    const double h_truth = entropy(truth_sizes);
    if (h_pred == 0.0 && h_truth == 0.0) return 1.0;
    if (h_pred == 0.0 || h_truth == 0.0) return 0.0;

    double mutual = 0;
    for (Index i = 0; i < table.counts.rows(); ++i)
        for (Index j = 0; j < table.counts.cols(); ++j)
            if (table.counts(i, j) > 0) {
                const double joint = table.counts(i, j) / n;
                mutual += joint * std::log(n * table.counts(i, j) /
                                           (double(pred_sizes(i)) * double(truth_sizes(j))));
            }
    return std::clamp(mutual / std::sqrt(h_pred * h_truth), 0.0, 1.0);
}

namespace detail {

// Max-total assignment on a rectangular score matrix via the Hungarian
// algorithm on the square-padded cost matrix (potentials formulation).
inline long hungarian_max_total(const Eigen::MatrixXi& scores) {
    const Index k = std::max(scores.rows(), scores.cols());
    std::vector<std::vector<double>> cost(static_cast<size_t>(k + 1),
                                          std::vector<double>(static_cast<size_t>(k + 1), 0.0));
    for (Index i = 0; i < scores.rows(); ++i)
        for (Index j = 0; j < scores.cols(); ++j)
            cost[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)] = -double(scores(i, j));

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<size_t>(k + 1), 0.0), v(static_cast<size_t>(k + 1), 0.0);
    std::vector<Index> match(static_cast<size_t>(k + 1), 0), way(static_cast<size_t>(k + 1), 0);
    for (Index i = 1; i <= k; ++i) {
        match[0] = i;
        Index j0 = 0;
        std::vector<double> minv(static_cast<size_t>(k + 1), inf);
        std::vector<char> used(static_cast<size_t>(k + 1), 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const Index i0 = match[static_cast<size_t>(j0)];
            double delta = inf;
            Index j1 = 0;
            for (Index j = 1; j <= k; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost[static_cast<size_t>(i0)][static_cast<size_t>(j)] -
                                   u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= k; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<size_t>(j0)] != 0);
        do {
            const Index j1 = way[static_cast<size_t>(j0)];
            match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    long total = 0;
    for (Index j = 1; j <= k; ++j) {
        const Index i = match[static_cast<size_t>(j)];
        if (i >= 1 && i <= scores.rows() && j <= scores.cols()) total += scores(i - 1, j - 1);
    }
    return total;
}

}  // namespace detail

/// Clustering accuracy: the best matching fraction over all bijections
/// between predicted clusters and true classes, computed exactly.
inline double acc(const IntVector& pred, const IntVector& truth) {
    const ContingencyTable table = contingency_table(pred, truth);
    return double(detail::hungarian_max_total(table.counts)) / double(table.total);
}

/// Fraction of samples covered by each predicted cluster's dominant class.
inline double purity(const IntVector& pred, const IntVector& truth) {
    const ContingencyTable table = contingency_table(pred, truth);
    long covered = 0;
    for (Index i = 0; i < table.counts.rows(); ++i) covered += table.counts.row(i).maxCoeff();
    return double(covered) / double(table.total);
}

}  // namespace mvfsgl
