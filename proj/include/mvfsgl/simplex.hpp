#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mvfsgl/types.hpp"

namespace mvfsgl {

/// Euclidean projection onto the probability simplex {s : sum(s) = 1, s >= 0}
/// by the sort-and-threshold rule: s_i = max(r_i - tau, 0) with tau chosen so
/// that the positive entries sum to one. Unique minimizer of ||s - r||^2.
template <typename Derived>
Vector<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& target) {
    using Scalar = typename Derived::Scalar;
    const Vector<Scalar> r = target;  // materialize once; the input may be a lazy expression
    const Index n = r.size();
    if (n == 0) throw std::invalid_argument("project_simplex: empty target");
    if (!r.allFinite()) throw std::invalid_argument("project_simplex: non-finite target");

    std::vector<Scalar> sorted(r.data(), r.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

    Scalar cumulative = 0;
    Scalar tau = (sorted[0] - Scalar(1));  // overwritten below; rho >= 1 always holds
    Index rho = 0;
    for (Index j = 0; j < n; ++j) {
        cumulative += sorted[static_cast<size_t>(j)];
        const Scalar candidate = (cumulative - Scalar(1)) / Scalar(j + 1);
        if (sorted[static_cast<size_t>(j)] > candidate) {
            tau = candidate;
            rho = j + 1;
        }
    }
    (void)rho;

    Vector<Scalar> s(n);
    for (Index i = 0; i < n; ++i) s(i) = std::max(r(i) - tau, Scalar(0));
    return s;
}

}  // namespace mvfsgl
