#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "mvfsgl/types.hpp"

namespace mvfsgl {

template <typename Scalar = double>
struct KMeansResult {
    IntVector labels;
    Scalar inertia = std::numeric_limits<Scalar>::infinity();  // within-cluster sum of squares
    int iterations = 0;
};

namespace detail {

// Squared distance of every column of x to every center column: n x c.
template <typename Scalar>
Matrix<Scalar> center_costs(const Matrix<Scalar>& x, const Matrix<Scalar>& centers) {
    Matrix<Scalar> costs = (-Scalar(2)) * (x.transpose() * centers);
    costs.rowwise() += centers.colwise().squaredNorm();
    return costs;  // offset by ||x_i||^2, irrelevant for argmin
}

}  // namespace detail

/// One seeded Lloyd run over the columns of x (features x samples) with
/// greedy k-means++ seeding. Ties in assignment go to the smaller center
/// index; empty clusters are repaired by reassigning the farthest point.
/// `inertia_trace`, when given, receives the objective after every sweep.
template <typename Scalar>
KMeansResult<Scalar> kmeans_single(const Matrix<Scalar>& x, int clusters, std::mt19937_64& rng,
                                   int max_iters = 300, std::vector<Scalar>* inertia_trace = nullptr) {
    const Index n = x.cols();
    if (clusters < 1 || n < clusters) throw std::invalid_argument("kmeans: need 1 <= clusters <= samples");

    // greedy k-means++: several D^2-sampled candidates per center, keep the
    // one with the lowest resulting potential
    Matrix<Scalar> centers(x.rows(), clusters);
    std::uniform_int_distribution<Index> uniform_sample(0, n - 1);
    centers.col(0) = x.col(uniform_sample(rng));
    Vector<Scalar> d2 = (x.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
    const int candidates = 2 + static_cast<int>(std::log(static_cast<double>(clusters)));
    std::vector<double> weights(static_cast<size_t>(n));
    for (int k = 1; k < clusters; ++k) {
        const Scalar potential = d2.sum();
        Index best = 0;
        Scalar best_potential = std::numeric_limits<Scalar>::infinity();
        for (int t = 0; t < candidates; ++t) {
            Index pick;
            if (potential > Scalar(0)) {
                for (Index i = 0; i < n; ++i) weights[static_cast<size_t>(i)] = static_cast<double>(d2(i));
                std::discrete_distribution<Index> sample(weights.begin(), weights.end());
                pick = sample(rng);
            } else {
                pick = uniform_sample(rng);
            }
            const Vector<Scalar> cand =
                (x.colwise() - x.col(pick)).colwise().squaredNorm().transpose().cwiseMin(d2);
            const Scalar cand_potential = cand.sum();
            if (cand_potential < best_potential) {
                best_potential = cand_potential;
                best = pick;
            }
        }
        centers.col(k) = x.col(best);
        d2 = d2.cwiseMin((x.colwise() - centers.col(k)).colwise().squaredNorm().transpose());
    }

    KMeansResult<Scalar> result;
    result.labels = IntVector::Constant(n, -1);
    const Vector<Scalar> x_sq = x.colwise().squaredNorm().transpose();
    std::vector<Index> sizes(static_cast<size_t>(clusters));
    for (int sweep = 0; sweep < max_iters; ++sweep) {
        const Matrix<Scalar> costs = detail::center_costs(x, centers);
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            Index k;
            costs.row(i).minCoeff(&k);  // first minimum wins ties
            if (result.labels(i) != static_cast<int>(k)) {
                result.labels(i) = static_cast<int>(k);
                changed = true;
            }
        }
        result.iterations = sweep + 1;

        std::fill(sizes.begin(), sizes.end(), Index(0));
        for (Index i = 0; i < n; ++i) ++sizes[static_cast<size_t>(result.labels(i))];
        for (int k = 0; k < clusters; ++k) {
            if (sizes[static_cast<size_t>(k)] > 0) continue;
            // steal the point farthest from its center
            Index worst = -1;
            Scalar worst_cost = -std::numeric_limits<Scalar>::infinity();
            for (Index i = 0; i < n; ++i) {
                const int owner = result.labels(i);
                if (sizes[static_cast<size_t>(owner)] < 2) continue;
                const Scalar cost = x_sq(i) + costs(i, owner);
                if (cost > worst_cost) {
                    worst_cost = cost;
                    worst = i;
                }
            }
            if (worst < 0) throw std::runtime_error("kmeans: cannot repair empty cluster");
            --sizes[static_cast<size_t>(result.labels(worst))];
            result.labels(worst) = k;
            ++sizes[static_cast<size_t>(k)];
            changed = true;
        }

        centers.setZero();
        for (Index i = 0; i < n; ++i) centers.col(result.labels(i)) += x.col(i);
        for (int k = 0; k < clusters; ++k) centers.col(k) /= Scalar(sizes[static_cast<size_t>(k)]);

        if (inertia_trace || !changed || sweep + 1 == max_iters) {
            Scalar inertia = 0;
            for (Index i = 0; i < n; ++i)
                inertia += (x.col(i) - centers.col(result.labels(i))).squaredNorm();
            result.inertia = inertia;
            if (inertia_trace) inertia_trace->push_back(inertia);
        }
        if (!changed) break;
    }
    return result;
}

/// Best-of-restarts Lloyd's algorithm; deterministic for a fixed seed.
template <typename Scalar = double>
KMeansResult<Scalar> kmeans(const Matrix<Scalar>& x, int clusters, int restarts, std::uint64_t seed,
                            int max_iters = 300) {
    if (restarts < 1) throw std::invalid_argument("kmeans: need at least one restart");
    std::mt19937_64 master(seed);
    KMeansResult<Scalar> best;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(master());
        KMeansResult<Scalar> run = kmeans_single(x, clusters, rng, max_iters);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

}  // namespace mvfsgl
