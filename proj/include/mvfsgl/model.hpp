#pragma once

#include <Eigen/Cholesky>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mvfsgl/affinity.hpp"
#include "mvfsgl/dataset.hpp"
#include "mvfsgl/kmeans.hpp"
#include "mvfsgl/laplacian.hpp"
#include "mvfsgl/parallel.hpp"
#include "mvfsgl/procrustes.hpp"
#include "mvfsgl/simplex.hpp"
#include "mvfsgl/types.hpp"
#include "mvfsgl/view_weights.hpp"

namespace mvfsgl {

template <typename Scalar = double>
struct Hyperparams {
    Scalar eta = 1;       // row-sparsity (l2,1) weight, >= 0
    Scalar beta = 1;      // graph-learning weight, >= 0 (> 0 to update the graph)
    Scalar gamma = 1;     // locality-preservation weight, >= 0
    Scalar alpha = 1000;  // penalty coupling the indicator to its nonnegative copy, > 0
    int clusters = 2;
    int neighbors = 5;
    Scalar tolerance = Scalar(1e-5);  // relative objective change at convergence
    int max_iters = 100;
    int projected_dim = 0;  // 0 means "use the cluster count"

    int dim() const { return projected_dim > 0 ? projected_dim : clusters; }
};

template <typename Scalar>
void validate(const Hyperparams<Scalar>& hp) {
    if (hp.clusters < 2) throw std::invalid_argument("hyperparams: need at least 2 clusters");
    if (!(hp.alpha > Scalar(0))) throw std::invalid_argument("hyperparams: alpha must be positive");
    if (hp.eta < Scalar(0) || hp.beta < Scalar(0) || hp.gamma < Scalar(0))
        throw std::invalid_argument("hyperparams: weights must be nonnegative");
    if (!(hp.tolerance > Scalar(0))) throw std::invalid_argument("hyperparams: tolerance must be positive");
    if (hp.max_iters < 1) throw std::invalid_argument("hyperparams: need at least one iteration");
    if (hp.neighbors < 1) throw std::invalid_argument("hyperparams: need at least one neighbor");
    if (hp.dim() < hp.clusters)
        throw std::invalid_argument("hyperparams: projected dimension must be >= cluster count");
}

/// All decision variables of the joint model.
template <typename Scalar = double>
struct ModelState {
    std::vector<Matrix<Scalar>> projections;    // per view, m_v x d; row norms score features (W)
    std::vector<Matrix<Scalar>> bases;          // per view, d x c, orthonormal columns (B)
    Matrix<Scalar> indicator;                   // n x c, orthonormal columns (H)
    Matrix<Scalar> nonneg_indicator;            // n x c, entrywise >= 0 (Z)
    Matrix<Scalar> graph;                       // n x n learned similarity, rows on the simplex (S)
    Vector<Scalar> view_weights;                // simplex-constrained (delta)
    std::vector<Vector<Scalar>> reweight_diag;  // per view, positive diagonal of the l2,1 surrogate (D)

    int view_count() const { return static_cast<int>(projections.size()); }
};

template <typename Scalar = double>
struct ConstraintResiduals {
    Scalar indicator_orth = 0;       // max |H^T H - I|
    Scalar basis_orth = 0;           // max over views of max |B^T B - I|
    Scalar nonneg_indicator_min = 0; // min entry of Z
    Scalar graph_row_sum = 0;        // max |S 1 - 1|
    Scalar graph_min = 0;            // min entry of S
    Scalar view_weight_sum = 0;      // |sum(delta) - 1|
    Scalar view_weight_min = 0;      // min delta
    Scalar laplacian_row_sum = 0;    // max |L 1|
};

template <typename Scalar = double>
struct IterationRecord {
    Scalar objective = 0;  // value of the unpenalized model objective
    Scalar penalized = 0;  // objective plus the indicator-coupling penalty
    std::array<Scalar, 6> step_penalized{};  // penalized value after each update step
    ConstraintResiduals<Scalar> residuals;
};

template <typename Scalar = double>
struct RunTrace {
    Scalar initial_objective = 0;
    Scalar initial_penalized = 0;
    std::vector<IterationRecord<Scalar>> iterations;
    bool converged = false;
};

inline constexpr std::array<const char*, 6> kUpdateStepNames = {
    "view-weights", "projections", "bases", "nonneg-indicator", "indicator", "graph"};

template <typename Scalar = double>
struct ObjectiveValue {
    Scalar objective = 0;
    Scalar penalized = 0;
};

/// Full model objective: per view, the decomposition residual
/// ||W^T X - B H^T||_F^2, the l2,1 row-sparsity term, the cross-space
/// locality term Tr(W^T X L X^T W) with L rebuilt from the current graph,
/// and the graph-fusion residual beta ||S - delta_v A_v||_F^2. The penalized
/// variant adds alpha ||H - Z||_F^2.
template <typename Scalar>
ObjectiveValue<Scalar> evaluate(const ModelState<Scalar>& state, const MultiViewDataset<Scalar>& ds,
                                const std::vector<AffinityGraph<Scalar>>& affinities,
                                const Hyperparams<Scalar>& hp) {
    const GraphLaplacian<Scalar> lap = laplacian(state.graph);
    Scalar total = 0;
    for (int v = 0; v < state.view_count(); ++v) {
        const auto& x = ds.views[static_cast<size_t>(v)];
        const auto& w = state.projections[static_cast<size_t>(v)];
        const Matrix<Scalar> y = w.transpose() * x;
        total += (y - state.bases[static_cast<size_t>(v)] * state.indicator.transpose()).squaredNorm();
        total += hp.eta * w.rowwise().norm().sum();
        if (hp.gamma != Scalar(0)) total += hp.gamma * ((y * lap.matrix).cwiseProduct(y)).sum();
        total += hp.beta *
                 (state.graph - state.view_weights(v) * affinities[static_cast<size_t>(v)].matrix).squaredNorm();
    }
    ObjectiveValue<Scalar> value;
    value.objective = total;
    value.penalized = total + hp.alpha * (state.indicator - state.nonneg_indicator).squaredNorm();
    return value;
}

template <typename Scalar>
ConstraintResiduals<Scalar> constraint_residuals(const ModelState<Scalar>& state) {
    ConstraintResiduals<Scalar> r;
    const Index c = state.indicator.cols();
    r.indicator_orth = (state.indicator.transpose() * state.indicator - Matrix<Scalar>::Identity(c, c))
                           .cwiseAbs()
                           .maxCoeff();
    for (const auto& b : state.bases) {
        const Index bc = b.cols();
        r.basis_orth = std::max(
            r.basis_orth,
            (b.transpose() * b - Matrix<Scalar>::Identity(bc, bc)).cwiseAbs().maxCoeff());
    }
    r.nonneg_indicator_min = state.nonneg_indicator.minCoeff();
    r.graph_row_sum = (state.graph.rowwise().sum().array() - Scalar(1)).abs().maxCoeff();
    r.graph_min = state.graph.minCoeff();
    r.view_weight_sum = std::abs(state.view_weights.sum() - Scalar(1));
    r.view_weight_min = state.view_weights.minCoeff();
    r.laplacian_row_sum = laplacian(state.graph).matrix.rowwise().sum().cwiseAbs().maxCoeff();
    return r;
}

/// View weights from the current graph: p_v = <A_v, S>, q_v = ||A_v||_F^2.
template <typename Scalar>
void update_view_weights(ModelState<Scalar>& state, const std::vector<AffinityGraph<Scalar>>& affinities) {
    const int views = state.view_count();
    DeltaScratch<Scalar> scratch;
    scratch.p.resize(views);
    scratch.q.resize(views);
    for (int v = 0; v < views; ++v) {
        const auto& a = affinities[static_cast<size_t>(v)].matrix;
        scratch.p(v) = a.cwiseProduct(state.graph).sum();
        scratch.q(v) = a.squaredNorm();
    }
    state.view_weights = solve_view_weights(scratch).delta;
}

/// Per-view ridge-type solve for the projection matrices, followed by the
/// l2,1 reweighting refresh d_ii = 1 / (2 max(||w_i.||, 1e-8)). Returns the
/// relative linear-system residual per view.
template <typename Scalar>
std::vector<Scalar> update_projections(ModelState<Scalar>& state, const MultiViewDataset<Scalar>& ds,
                                       const Hyperparams<Scalar>& hp) {
    const GraphLaplacian<Scalar> lap = laplacian(state.graph);
    std::vector<Scalar> residuals(static_cast<size_t>(state.view_count()), Scalar(0));
    parallel_for(state.view_count(), [&](int v) {
        const auto& x = ds.views[static_cast<size_t>(v)];
        Matrix<Scalar> lhs = x * x.transpose();
        if (hp.gamma != Scalar(0)) lhs.noalias() += hp.gamma * ((x * lap.matrix) * x.transpose());
        lhs.diagonal() += hp.eta * state.reweight_diag[static_cast<size_t>(v)];
        const Matrix<Scalar> rhs =
            x * (state.indicator * state.bases[static_cast<size_t>(v)].transpose());

        Eigen::LLT<Matrix<Scalar>> llt(lhs);
        if (llt.info() != Eigen::Success) {
            lhs.diagonal().array() += Scalar(1e-10);
            llt.compute(lhs);
            if (llt.info() != Eigen::Success) {
                const Eigen::LDLT<Matrix<Scalar>> ldlt(lhs);
                const auto d = ldlt.vectorD().cwiseAbs();
                const Scalar cond =
                    d.minCoeff() > Scalar(0) ? d.maxCoeff() / d.minCoeff() : std::numeric_limits<Scalar>::infinity();
                throw std::runtime_error("update_projections: view " + std::to_string(v + 1) +
                                         ": system not positive definite after jitter (condition estimate " +
                                         std::to_string(static_cast<double>(cond)) + ")");
            }
        }
        Matrix<Scalar> w = llt.solve(rhs);
        const Scalar rhs_norm = rhs.norm();
        Matrix<Scalar> gap = rhs - lhs * w;
        if (gap.norm() > Scalar(1e-13) * rhs_norm) w += llt.solve(gap);  // one refinement pass
        residuals[static_cast<size_t>(v)] =
            (lhs * w - rhs).norm() / std::max(rhs_norm, std::numeric_limits<Scalar>::min());
        state.projections[static_cast<size_t>(v)] = std::move(w);

        auto& diag = state.reweight_diag[static_cast<size_t>(v)];
        for (Index i = 0; i < diag.size(); ++i) {
            const Scalar norm = state.projections[static_cast<size_t>(v)].row(i).norm();
            diag(i) = Scalar(1) / (Scalar(2) * std::max(norm, Scalar(1e-8)));
        }
    });
    return residuals;
}

/// Per-view orthogonal Procrustes fit of the basis to the projected data.
template <typename Scalar>
void update_bases(ModelState<Scalar>& state, const MultiViewDataset<Scalar>& ds) {
    parallel_for(state.view_count(), [&](int v) {
        const Matrix<Scalar> m = (state.projections[static_cast<size_t>(v)].transpose() *
                                  ds.views[static_cast<size_t>(v)]) *
                                 state.indicator;
        state.bases[static_cast<size_t>(v)] = solve_procrustes(m);
    });
}

/// Entrywise projection of the indicator onto the nonnegative orthant.
template <typename Scalar>
void update_nonneg_indicator(ModelState<Scalar>& state) {
    state.nonneg_indicator = state.indicator.cwiseMax(Scalar(0));
}

/// Orthogonal Procrustes fit of the shared indicator to the stacked
/// per-view targets plus the coupled nonnegative copy.
template <typename Scalar>
void update_indicator(ModelState<Scalar>& state, const MultiViewDataset<Scalar>& ds,
                      const Hyperparams<Scalar>& hp) {
    Matrix<Scalar> m = hp.alpha * state.nonneg_indicator;
    for (int v = 0; v < state.view_count(); ++v)
        m.noalias() += ds.views[static_cast<size_t>(v)].transpose() *
                       (state.projections[static_cast<size_t>(v)] * state.bases[static_cast<size_t>(v)]);
    state.indicator = solve_procrustes(m);
}

/// Row-wise simplex projection of the fused target: row i aims at
/// (2 sum_v delta_v a_i - (gamma / 2 beta) sum_v g_i) / (2 V), where g holds
/// squared distances between projected samples.
template <typename Scalar>
void update_graph(ModelState<Scalar>& state, const MultiViewDataset<Scalar>& ds,
                  const std::vector<AffinityGraph<Scalar>>& affinities, const Hyperparams<Scalar>& hp) {
    if (!(hp.beta > Scalar(0)))
        throw std::invalid_argument(
            "update_graph: beta must be positive; to run without graph learning, skip the graph update "
            "explicitly instead of setting beta to zero");
    const Index n = state.graph.rows();
    const int views = state.view_count();

    Matrix<Scalar> target = Matrix<Scalar>::Zero(n, n);
    for (int v = 0; v < views; ++v)
        target += (Scalar(2) * state.view_weights(v)) * affinities[static_cast<size_t>(v)].matrix;
    if (hp.gamma != Scalar(0)) {
        const Scalar coeff = hp.gamma / (Scalar(2) * hp.beta);
        for (int v = 0; v < views; ++v) {
            const Matrix<Scalar> y =
                state.projections[static_cast<size_t>(v)].transpose() * ds.views[static_cast<size_t>(v)];
            target -= coeff * pairwise_sq_distances(y);
        }
    }
    target /= Scalar(2 * views);

    for (Index i = 0; i < n; ++i)
        state.graph.row(i) = project_simplex(target.row(i).transpose()).transpose();
}

/// Starting point: uniform view weights, the weighted affinity sum as the
/// graph, a k-means indicator over the stacked views (columns scaled to unit
/// norm), identity-block projections, identity reweighting, and bases fit by
/// Procrustes. Deterministic for a fixed seed.
template <typename Scalar>
ModelState<Scalar> initialize(const MultiViewDataset<Scalar>& ds,
                              const std::vector<AffinityGraph<Scalar>>& affinities,
                              const Hyperparams<Scalar>& hp, std::uint64_t seed) {
    validate(hp);
    const Index n = ds.sample_count();
    const int views = ds.view_count();
    const int c = hp.clusters;
    const int d = hp.dim();
    if (views < 1) throw std::invalid_argument("initialize: empty dataset");
    if (n < c) throw std::invalid_argument("initialize: fewer samples than clusters");
    for (int v = 0; v < views; ++v)
        if (ds.views[static_cast<size_t>(v)].rows() < d)
            throw std::invalid_argument("initialize: view " + std::to_string(v + 1) +
                                        " has fewer features than the projected dimension");

    ModelState<Scalar> state;
    state.view_weights = Vector<Scalar>::Constant(views, Scalar(1) / Scalar(views));
    state.graph = Matrix<Scalar>::Zero(n, n);
    for (int v = 0; v < views; ++v)
        state.graph += state.view_weights(v) * affinities[static_cast<size_t>(v)].matrix;
    // rescale rows to unit sum so the graph starts feasible (rows of the
    // weighted affinity sum add up to the view count in row-scaled mode)
    for (Index i = 0; i < n; ++i) {
        const Scalar sum = state.graph.row(i).sum();
        if (sum > Scalar(0)) state.graph.row(i) /= sum;
    }

    const KMeansResult<Scalar> seed_clusters = kmeans(concatenate_views(ds), c, 10, seed);
    std::vector<Index> sizes(static_cast<size_t>(c), 0);
    for (Index i = 0; i < n; ++i) ++sizes[static_cast<size_t>(seed_clusters.labels(i))];
    for (int k = 0; k < c; ++k)
        if (sizes[static_cast<size_t>(k)] == 0)
            throw std::runtime_error("initialize: k-means produced an empty cluster");
    state.indicator = Matrix<Scalar>::Zero(n, c);
    for (Index i = 0; i < n; ++i) {
        const int k = seed_clusters.labels(i);
        state.indicator(i, k) = Scalar(1) / std::sqrt(Scalar(sizes[static_cast<size_t>(k)]));
    }
    state.nonneg_indicator = state.indicator;

    for (int v = 0; v < views; ++v) {
        const Index m = ds.views[static_cast<size_t>(v)].rows();
        Matrix<Scalar> w = Matrix<Scalar>::Zero(m, d);
        w.topRows(d).setIdentity();
        state.projections.push_back(std::move(w));
        state.reweight_diag.push_back(Vector<Scalar>::Ones(m));
    }
    state.bases.resize(static_cast<size_t>(views));
    update_bases(state, ds);
    return state;
}

template <typename Scalar = double>
struct FitResult {
    ModelState<Scalar> state;
    RunTrace<Scalar> trace;
    std::vector<AffinityGraph<Scalar>> affinities;
};

template <typename Scalar = double>
using IterationCallback = std::function<void(const ModelState<Scalar>&, int, const IterationRecord<Scalar>&)>;

/// Alternating minimization over all variables, in the fixed step order
/// view-weights, projections, bases, nonnegative indicator, indicator,
/// graph. Stops when the relative change of the model objective falls to
/// `tolerance` or after `max_iters` sweeps. Expects a min-max normalized
/// dataset.
template <typename Scalar>
FitResult<Scalar> fit(const MultiViewDataset<Scalar>& ds, const Hyperparams<Scalar>& hp,
                      AffinityMode mode, std::uint64_t seed,
                      const std::type_identity_t<IterationCallback<Scalar>>& on_iteration = {}) {
    validate(hp);
    for (int v = 0; v < ds.view_count(); ++v) {
        const auto& x = ds.views[static_cast<size_t>(v)];
        if (x.minCoeff() < Scalar(-1e-9) || x.maxCoeff() > Scalar(1) + Scalar(1e-9))
            throw std::invalid_argument("fit: view " + std::to_string(v + 1) +
                                        " is not min-max normalized");
    }
    if (hp.neighbors >= ds.sample_count())
        throw std::invalid_argument("fit: neighbor count must be below the sample count");

    FitResult<Scalar> result;
    result.affinities = build_affinities(ds, hp.neighbors, mode);
    result.state = initialize(ds, result.affinities, hp, seed);

    auto& state = result.state;
    auto& trace = result.trace;
    const ObjectiveValue<Scalar> start = evaluate(state, ds, result.affinities, hp);
    trace.initial_objective = start.objective;
    trace.initial_penalized = start.penalized;

    Scalar prev_objective = start.objective;
    for (int iter = 1; iter <= hp.max_iters; ++iter) {
        IterationRecord<Scalar> rec;
        ObjectiveValue<Scalar> value;
        for (int step = 0; step < 6; ++step) {
            switch (step) {
                case 0: update_view_weights(state, result.affinities); break;
                case 1: update_projections(state, ds, hp); break;
                case 2: update_bases(state, ds); break;
                case 3: update_nonneg_indicator(state); break;
                case 4: update_indicator(state, ds, hp); break;
                case 5: update_graph(state, ds, result.affinities, hp); break;
            }
            value = evaluate(state, ds, result.affinities, hp);
            if (!std::isfinite(value.penalized))
                throw std::runtime_error(std::string("fit: objective became non-finite after the ") +
                                         kUpdateStepNames[static_cast<size_t>(step)] + " update in iteration " +
                                         std::to_string(iter));
            rec.step_penalized[static_cast<size_t>(step)] = value.penalized;
        }
        rec.objective = value.objective;
        rec.penalized = value.penalized;
        rec.residuals = constraint_residuals(state);
        trace.iterations.push_back(rec);
        if (on_iteration) on_iteration(state, iter, rec);

        const Scalar rel = prev_objective != Scalar(0)
                               ? std::abs((prev_objective - rec.objective) / prev_objective)
                               : (rec.objective == Scalar(0) ? Scalar(0)
                                                             : std::numeric_limits<Scalar>::infinity());
        if (rel <= hp.tolerance) {
            trace.converged = true;
            break;
        }
        prev_objective = rec.objective;
    }
    return result;
}

template <typename Scalar = double>
struct GraphOnlyResult {
    Matrix<Scalar> graph;
    Vector<Scalar> view_weights;
    int iterations = 0;
    bool converged = false;
};

/// Pure graph fusion: alternates the view-weight solve with row-wise simplex
/// projection of the weighted affinity mean, ignoring the feature-selection
/// model entirely.
template <typename Scalar>
GraphOnlyResult<Scalar> fit_graph_only(const std::vector<AffinityGraph<Scalar>>& affinities,
                                       Scalar tolerance = Scalar(1e-5), int max_iters = 100) {
    const int views = static_cast<int>(affinities.size());
    if (views < 1) throw std::invalid_argument("fit_graph_only: no affinity graphs");
    const Index n = affinities.front().matrix.rows();

    GraphOnlyResult<Scalar> result;
    result.view_weights = Vector<Scalar>::Constant(views, Scalar(1) / Scalar(views));
    result.graph = Matrix<Scalar>::Zero(n, n);
    for (int v = 0; v < views; ++v)
        result.graph += result.view_weights(v) * affinities[static_cast<size_t>(v)].matrix;
    for (Index i = 0; i < n; ++i) {
        const Scalar sum = result.graph.row(i).sum();
        if (sum > Scalar(0)) result.graph.row(i) /= sum;
    }

    const auto objective = [&] {
        Scalar total = 0;
        for (int v = 0; v < views; ++v)
            total += (result.graph - result.view_weights(v) * affinities[static_cast<size_t>(v)].matrix)
                         .squaredNorm();
        return total;
    };

    Scalar prev = objective();
    for (int iter = 1; iter <= max_iters; ++iter) {
        DeltaScratch<Scalar> scratch;
        scratch.p.resize(views);
        scratch.q.resize(views);
        for (int v = 0; v < views; ++v) {
            const auto& a = affinities[static_cast<size_t>(v)].matrix;
            scratch.p(v) = a.cwiseProduct(result.graph).sum();
            scratch.q(v) = a.squaredNorm();
        }
        result.view_weights = solve_view_weights(scratch).delta;

        Matrix<Scalar> target = Matrix<Scalar>::Zero(n, n);
        for (int v = 0; v < views; ++v)
            target += result.view_weights(v) * affinities[static_cast<size_t>(v)].matrix;
        target /= Scalar(views);
        for (Index i = 0; i < n; ++i)
            result.graph.row(i) = project_simplex(target.row(i).transpose()).transpose();

        result.iterations = iter;
        const Scalar value = objective();
        const Scalar rel =
            prev != Scalar(0) ? std::abs((prev - value) / prev) : (value == Scalar(0) ? Scalar(0) : Scalar(1));
        if (rel <= tolerance) {
            result.converged = true;
            break;
        }
        prev = value;
    }
    return result;
}

template <typename Scalar = double>
struct FeatureRanking {
    std::vector<int> order;  // feature indices, best first; ties by smaller index
    Vector<Scalar> scores;   // squared projection row norms, indexed by feature
};

template <typename Scalar>
std::vector<FeatureRanking<Scalar>> feature_scores(const ModelState<Scalar>& state) {
    std::vector<FeatureRanking<Scalar>> rankings;
    for (const auto& w : state.projections) {
        FeatureRanking<Scalar> ranking;
        ranking.scores = w.rowwise().squaredNorm();
        ranking.order.resize(static_cast<size_t>(w.rows()));
        for (Index i = 0; i < w.rows(); ++i) ranking.order[static_cast<size_t>(i)] = static_cast<int>(i);
        std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
            if (ranking.scores(a) != ranking.scores(b)) return ranking.scores(a) > ranking.scores(b);
            return a < b;
        });
        rankings.push_back(std::move(ranking));
    }
    return rankings;
}

/// Indices kept when retaining `percent` of `total` features (ceiling rule),
/// returned in ascending order.
template <typename Scalar>
std::vector<int> selected_indices(const FeatureRanking<Scalar>& ranking, double percent) {
    if (!(percent > 0.0) || percent > 100.0)
        throw std::invalid_argument("selected_indices: percent must lie in (0, 100]");
    const auto total = static_cast<double>(ranking.order.size());
    const auto keep = static_cast<size_t>(std::ceil(percent / 100.0 * total));
    std::vector<int> kept(ranking.order.begin(), ranking.order.begin() + static_cast<long>(keep));
    std::sort(kept.begin(), kept.end());
    return kept;
}

/// Reduces every view to its top-ranked features, independently per view.
template <typename Scalar>
MultiViewDataset<Scalar> select_features(const MultiViewDataset<Scalar>& ds,
                                         const std::vector<FeatureRanking<Scalar>>& rankings,
                                         double percent) {
    if (rankings.size() != ds.views.size())
        throw std::invalid_argument("select_features: ranking/view count mismatch");
    MultiViewDataset<Scalar> out;
    out.labels = ds.labels;
    out.view_names = ds.view_names;
    for (size_t v = 0; v < ds.views.size(); ++v) {
        const std::vector<int> kept = selected_indices(rankings[v], percent);
        Matrix<Scalar> view(static_cast<Index>(kept.size()), ds.sample_count());
        for (size_t i = 0; i < kept.size(); ++i)
            view.row(static_cast<Index>(i)) = ds.views[v].row(kept[i]);
        out.views.push_back(std::move(view));
    }
    return out;
}

}  // namespace mvfsgl
