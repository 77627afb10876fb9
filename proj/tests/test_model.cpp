#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "mvfsgl/model.hpp"
#include "oracles.hpp"

using namespace mvfsgl;

namespace {

struct Instance {
    MultiViewDataset<double> ds;
    std::vector<AffinityGraph<double>> affinities;
    Hyperparams<double> hp;
    ModelState<double> state;
};

// A valid random model state over a small blob dataset.
Instance random_instance(std::uint64_t seed, int n = 14, int views = 2, int clusters = 3,
                         AffinityMode mode = AffinityMode::symmetric) {
    Instance inst;
    inst.ds = oracles::blob_fixture(n, clusters, views, 4, 3, 5.0, seed);
    inst.hp.clusters = clusters;
    inst.hp.neighbors = 3;
    inst.affinities = build_affinities(inst.ds, inst.hp.neighbors, mode);
    inst.state = initialize(inst.ds, inst.affinities, inst.hp, seed);

    // scramble the state away from the initialization, keeping it feasible
    std::mt19937_64 rng(seed * 7919 + 1);
    std::normal_distribution<double> gauss;
    for (auto& w : inst.state.projections)
        for (Index i = 0; i < w.size(); ++i) w.data()[i] = gauss(rng);
    for (auto& b : inst.state.bases) b = oracles::random_orthonormal(b.rows(), b.cols(), rng);
    inst.state.indicator = oracles::random_orthonormal(n, clusters, rng);
    inst.state.nonneg_indicator = inst.state.indicator.cwiseMax(0.0);
    for (Index i = 0; i < n; ++i)
        inst.state.graph.row(i) =
            project_simplex(Eigen::VectorXd::NullaryExpr(n, [&](Index) { return gauss(rng); })).transpose();
    update_view_weights(inst.state, inst.affinities);
    for (auto& d : inst.state.reweight_diag)
        for (Index i = 0; i < d.size(); ++i) d(i) = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
    return inst;
}

}  // namespace

TEST_CASE("objective term isolation") {
    auto inst = random_instance(1);
    const Index n = inst.ds.sample_count();

    SUBCASE("all-zero factors leave only the graph-fusion term") {
        for (auto& w : inst.state.projections) w.setZero();
        for (auto& b : inst.state.bases) b.setZero();
        inst.state.indicator.setZero();
        inst.state.nonneg_indicator.setZero();
        inst.state.view_weights = Eigen::VectorXd::Constant(2, 0.5);
        inst.state.graph = 0.5 * inst.affinities[0].matrix + 0.5 * inst.affinities[1].matrix;
        double expected = 0;
        for (int v = 0; v < 2; ++v)
            expected +=
                inst.hp.beta * (inst.state.graph - 0.5 * inst.affinities[size_t(v)].matrix).squaredNorm();
        CHECK(evaluate(inst.state, inst.ds, inst.affinities, inst.hp).objective ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("zero weights leave only the decomposition residual") {
        inst.hp.eta = inst.hp.beta = inst.hp.gamma = 0;
        double expected = 0;
        for (int v = 0; v < 2; ++v)
            expected += (inst.state.projections[size_t(v)].transpose() * inst.ds.views[size_t(v)] -
                         inst.state.bases[size_t(v)] * inst.state.indicator.transpose())
                            .squaredNorm();
        CHECK(evaluate(inst.state, inst.ds, inst.affinities, inst.hp).objective ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("double-entry oracle agrees to 1e-10") {
        for (std::uint64_t seed = 2; seed < 6; ++seed) {
            auto other = random_instance(seed);
            const auto value = evaluate(other.state, other.ds, other.affinities, other.hp);
            const double ref_obj =
                oracles::reference_objective(other.state, other.ds, other.affinities, other.hp, false);
            const double ref_pen =
                oracles::reference_objective(other.state, other.ds, other.affinities, other.hp, true);
            CHECK(value.objective == doctest::Approx(ref_obj).epsilon(1e-10));
            CHECK(value.penalized == doctest::Approx(ref_pen).epsilon(1e-10));
        }
    }
    (void)n;
}

TEST_CASE("laplacian hand cases and invariants") {
    const auto eye = laplacian(Matrix<double>::Identity(4, 4));
    CHECK(eye.matrix.cwiseAbs().maxCoeff() == 0.0);

    const Index n = 3;
    const auto uniform = laplacian(Matrix<double>(Matrix<double>::Constant(n, n, 1.0 / double(n))));
    const Matrix<double> expect =
        Matrix<double>::Identity(n, n) - Matrix<double>::Constant(n, n, 1.0 / double(n));
    CHECK((uniform.matrix - expect).cwiseAbs().maxCoeff() <= 1e-15);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif;
    Matrix<double> s(8, 8);
    for (Index i = 0; i < s.size(); ++i) s.data()[i] = unif(rng);
    const auto lap = laplacian(s);
    CHECK(lap.matrix.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((lap.s_bar - (s + s.transpose()) / 2.0).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Matrix<double>> es(lap.matrix);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("laplacian quadratic form equals the pairwise-distance sum") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    for (int t = 0; t < 20; ++t) {
        const Index n = 4 + Index(rng() % 8), m = 3 + Index(rng() % 4), d = 2;
        Matrix<double> x(m, n), w(m, d), s(n, n);
        for (Index i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
        for (Index i = 0; i < w.size(); ++i) w.data()[i] = gauss(rng);
        for (Index i = 0; i < s.size(); ++i) s.data()[i] = unif(rng);
        const auto lap = laplacian(s);
        const double trace_form = (w.transpose() * x * lap.matrix * x.transpose() * w).trace();
        double pairwise = 0;
        const Matrix<double> y = w.transpose() * x;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                pairwise += 0.5 * (y.col(i) - y.col(j)).squaredNorm() * lap.s_bar(i, j);
        CHECK(trace_form == doctest::Approx(pairwise).epsilon(1e-8));
    }
}

TEST_CASE("basis update hand cases") {
    SUBCASE("identity product gives the identity basis") {
        std::mt19937_64 rng(5);
        Instance inst;
        inst.ds.views.push_back(Matrix<double>::Identity(4, 4));
        inst.hp.clusters = 2;
        inst.state.indicator = oracles::random_orthonormal(4, 2, rng);
        inst.state.projections.push_back(inst.state.indicator);  // H^T X^T W = H^T H = I
        inst.state.bases.push_back(Matrix<double>::Zero(2, 2));
        update_bases(inst.state, inst.ds);
        CHECK((inst.state.bases[0] - Matrix<double>::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("symmetric positive definite product gives the identity (polar oracle)") {
        std::mt19937_64 rng(6);
        std::normal_distribution<double> gauss;
        Matrix<double> g(3, 3);
        for (Index i = 0; i < 9; ++i) g.data()[i] = gauss(rng);
        const Matrix<double> spd = g * g.transpose() + 3.0 * Matrix<double>::Identity(3, 3);

        Instance inst;
        inst.ds.views.push_back(Matrix<double>::Identity(3, 3));
        inst.state.indicator = Matrix<double>::Identity(3, 3);
        inst.state.projections.push_back(spd);  // H^T X^T W = spd
        inst.state.bases.push_back(Matrix<double>::Zero(3, 3));
        update_bases(inst.state, inst.ds);
        CHECK((inst.state.bases[0] - Matrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    }

    SUBCASE("update never increases the decomposition residual") {
        for (std::uint64_t seed = 3; seed < 7; ++seed) {
            auto inst = random_instance(seed);
            const auto residual = [&] {
                double total = 0;
                for (int v = 0; v < inst.ds.view_count(); ++v)
                    total += (inst.state.projections[size_t(v)].transpose() * inst.ds.views[size_t(v)] -
                              inst.state.bases[size_t(v)] * inst.state.indicator.transpose())
                                 .squaredNorm();
                return total;
            };
            const double before = residual();
            update_bases(inst.state, inst.ds);
            CHECK(residual() <= before + 1e-10);
            for (const auto& b : inst.state.bases)
                CHECK((b.transpose() * b - Matrix<double>::Identity(b.cols(), b.cols()))
                          .cwiseAbs()
                          .maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("nonnegative indicator update") {
    auto inst = random_instance(9);
    SUBCASE("nonnegative indicator is copied unchanged") {
        inst.state.indicator = inst.state.indicator.cwiseAbs();
        update_nonneg_indicator(inst.state);
        CHECK((inst.state.nonneg_indicator - inst.state.indicator).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("negative entries clamp to zero") {
        inst.state.indicator(0, 0) = -0.3;
        update_nonneg_indicator(inst.state);
        CHECK(inst.state.nonneg_indicator(0, 0) == 0.0);
        CHECK(inst.state.nonneg_indicator.minCoeff() >= 0.0);
    }
    SUBCASE("pointwise minimizer beats any feasible alternative") {
        update_nonneg_indicator(inst.state);
        const double best = (inst.state.indicator - inst.state.nonneg_indicator).squaredNorm();
        std::mt19937_64 rng(10);
        std::uniform_real_distribution<double> unif;
        for (int t = 0; t < 50; ++t) {
            Matrix<double> z(inst.state.indicator.rows(), inst.state.indicator.cols());
            for (Index i = 0; i < z.size(); ++i) z.data()[i] = unif(rng);
            CHECK((inst.state.indicator - z).squaredNorm() >= best - 1e-12);
        }
    }
}

TEST_CASE("indicator update") {
    SUBCASE("with zero projections the indicator snaps to the nonnegative copy") {
        auto inst = random_instance(11);
        for (auto& w : inst.state.projections) w.setZero();
        // make Z an orthonormal nonnegative indicator
        const Index n = inst.ds.sample_count();
        Matrix<double> z = Matrix<double>::Zero(n, 3);
        for (Index i = 0; i < n; ++i) z(i, i % 3) = 1.0;
        z.array().rowwise() /= z.colwise().norm().array();
        inst.state.nonneg_indicator = z;
        update_indicator(inst.state, inst.ds, inst.hp);
        CHECK((inst.state.indicator - z).cwiseAbs().maxCoeff() <= 1e-10);
    }

    SUBCASE("huge coupling weight pins the indicator to the copy") {
        auto inst = random_instance(13, 12, 1, 3);
        inst.hp.alpha = 1e8;
        const Index n = 12;
        Matrix<double> z = Matrix<double>::Zero(n, 3);
        for (Index i = 0; i < n; ++i) z(i, i % 3) = 0.5;  // orthonormal columns
        inst.state.nonneg_indicator = z;
        update_indicator(inst.state, inst.ds, inst.hp);
        CHECK((inst.state.indicator - z).norm() <= 1e-3);
    }

    SUBCASE("update never increases its subproblem value") {
        for (std::uint64_t seed = 14; seed < 18; ++seed) {
            auto inst = random_instance(seed);
            const auto value = [&] {
                double total = inst.hp.alpha * (inst.state.indicator - inst.state.nonneg_indicator).squaredNorm();
                for (int v = 0; v < inst.ds.view_count(); ++v)
                    total += (inst.state.projections[size_t(v)].transpose() * inst.ds.views[size_t(v)] -
                              inst.state.bases[size_t(v)] * inst.state.indicator.transpose())
                                 .squaredNorm();
                return total;
            };
            const double before = value();
            update_indicator(inst.state, inst.ds, inst.hp);
            CHECK(value() <= before + 1e-9 * std::abs(before));
            CHECK((inst.state.indicator.transpose() * inst.state.indicator -
                   Matrix<double>::Identity(3, 3))
                      .cwiseAbs()
                      .maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("projection update") {
    SUBCASE("identity data with vanishing regularization recovers H B^T") {
        const Index n = 6;
        Instance inst;
        inst.ds.views.push_back(Matrix<double>::Identity(n, n));
        inst.hp.clusters = 2;
        inst.hp.eta = 1e-12;
        inst.hp.gamma = 0;
        std::mt19937_64 rng(20);
        inst.state.indicator = oracles::random_orthonormal(n, 2, rng);
        inst.state.bases.push_back(oracles::random_orthonormal(2, 2, rng));
        inst.state.projections.push_back(Matrix<double>::Zero(n, 2));
        inst.state.reweight_diag.push_back(Vector<double>::Ones(n));
        inst.state.graph = Matrix<double>::Identity(n, n);
        inst.state.view_weights = Vector<double>::Ones(1);
        update_projections(inst.state, inst.ds, inst.hp);
        const Matrix<double> expect = inst.state.indicator * inst.state.bases[0].transpose();
        CHECK((inst.state.projections[0] - expect).cwiseAbs().maxCoeff() <= 1e-9);
    }

    SUBCASE("solver residual stays below 1e-8 and the reweighting refreshes") {
        for (std::uint64_t seed = 21; seed < 26; ++seed) {
            auto inst = random_instance(seed);
            const auto residuals = update_projections(inst.state, inst.ds, inst.hp);
            for (const double r : residuals) CHECK(r <= 1e-8);
            for (int v = 0; v < inst.ds.view_count(); ++v)
                for (Index i = 0; i < inst.state.reweight_diag[size_t(v)].size(); ++i) {
                    const double norm = inst.state.projections[size_t(v)].row(i).norm();
                    CHECK(inst.state.reweight_diag[size_t(v)](i) ==
                          doctest::Approx(1.0 / (2.0 * std::max(norm, 1e-8))));
                }
        }
    }

    SUBCASE("solution is a local minimum of the fixed-reweighting surrogate") {
        auto inst = random_instance(30);
        const auto diag_before = inst.state.reweight_diag;
        const GraphLaplacian<double> lap = laplacian(inst.state.graph);
        update_projections(inst.state, inst.ds, inst.hp);

        const auto surrogate = [&](const std::vector<Matrix<double>>& ws) {
            double total = 0;
            for (int v = 0; v < inst.ds.view_count(); ++v) {
                const auto& x = inst.ds.views[size_t(v)];
                const auto& w = ws[size_t(v)];
                total += (w.transpose() * x -
                          inst.state.bases[size_t(v)] * inst.state.indicator.transpose())
                             .squaredNorm();
                total += inst.hp.eta * (w.transpose() * diag_before[size_t(v)].asDiagonal() * w).trace();
                total += inst.hp.gamma * (w.transpose() * x * lap.matrix * x.transpose() * w).trace();
            }
            return total;
        };
        const double at_solution = surrogate(inst.state.projections);
        std::mt19937_64 rng(31);
        std::normal_distribution<double> gauss(0.0, 1e-2);
        for (int t = 0; t < 100; ++t) {
            auto perturbed = inst.state.projections;
            for (auto& w : perturbed)
                for (Index i = 0; i < w.size(); ++i) w.data()[i] += gauss(rng);
            CHECK(surrogate(perturbed) >= at_solution - 1e-10);
        }
    }
}

TEST_CASE("graph update") {
    SUBCASE("single view with feasible rows is a fixed point when gamma is zero") {
        auto inst = random_instance(40, 12, 1, 3, AffinityMode::row_scaled);
        inst.hp.gamma = 0;
        inst.state.view_weights = Vector<double>::Ones(1);
        // V=1 row-scaled affinity rows already sum to one
        update_graph(inst.state, inst.ds, inst.affinities, inst.hp);
        CHECK((inst.state.graph - inst.affinities[0].matrix).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("two views, gamma zero: rows project the weighted affinity mean") {
        auto inst = random_instance(41, 10, 2, 2);
        inst.hp.gamma = 0;
        update_graph(inst.state, inst.ds, inst.affinities, inst.hp);
        for (Index i = 0; i < 10; ++i) {
            Eigen::VectorXd target = Eigen::VectorXd::Zero(10);
            for (int v = 0; v < 2; ++v)
                target += inst.state.view_weights(v) * inst.affinities[size_t(v)].matrix.row(i).transpose();
            target /= 2.0;
            CHECK((inst.state.graph.row(i).transpose() - project_simplex(target)).cwiseAbs().maxCoeff() <=
                  1e-12);
        }
    }

    SUBCASE("rows land on the simplex") {
        auto inst = random_instance(42);
        update_graph(inst.state, inst.ds, inst.affinities, inst.hp);
        CHECK((inst.state.graph.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
        CHECK(inst.state.graph.minCoeff() >= -1e-12);
    }

    SUBCASE("zero graph weight is rejected with guidance") {
        auto inst = random_instance(43);
        inst.hp.beta = 0;
        CHECK_THROWS_AS(update_graph(inst.state, inst.ds, inst.affinities, inst.hp), std::invalid_argument);
    }
}

TEST_CASE("initialization contract") {
    SUBCASE("uniform view weights, unit-row graph, orthonormal indicator") {
        const auto ds = oracles::blob_fixture(24, 3, 2, 4, 2, 8.0, 50);
        Hyperparams<double> hp;
        hp.clusters = 3;
        hp.neighbors = 4;
        const auto affinities = build_affinities(ds, hp.neighbors, AffinityMode::row_scaled);
        const auto state = initialize(ds, affinities, hp, 50);
        CHECK(state.view_weights(0) == doctest::Approx(0.5));
        CHECK(state.view_weights(1) == doctest::Approx(0.5));
        CHECK((state.graph.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
        CHECK((state.indicator.transpose() * state.indicator - Matrix<double>::Identity(3, 3))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
        CHECK(state.indicator.minCoeff() >= 0.0);
        for (const auto& w : state.projections) {
            CHECK(w.topRows(3).isIdentity(0.0));
            if (w.rows() > 3) CHECK(w.bottomRows(w.rows() - 3).isZero(0.0));
        }
        for (const auto& d : state.reweight_diag) CHECK((d.array() == 1.0).all());
    }

    SUBCASE("single view keeps the (feasible) affinity as the graph") {
        const auto ds = oracles::blob_fixture(15, 2, 1, 3, 1, 6.0, 51);
        Hyperparams<double> hp;
        hp.clusters = 2;
        hp.neighbors = 3;
        const auto affinities = build_affinities(ds, hp.neighbors, AffinityMode::row_scaled);
        const auto state = initialize(ds, affinities, hp, 51);
        CHECK((state.graph - affinities[0].matrix).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("indicator entries are inverse square roots of cluster sizes") {
        // two tight blobs of sizes 3 and 1, far apart: k-means must split 3/1
        MultiViewDataset<double> ds;
        Matrix<double> view(2, 4);
        view << 0.0, 0.01, 0.02, 1.0, 0.0, 0.01, 0.02, 1.0;
        ds.views.push_back(view);
        Hyperparams<double> hp;
        hp.clusters = 2;
        hp.neighbors = 2;
        const auto affinities = build_affinities(ds, hp.neighbors, AffinityMode::row_scaled);
        const auto state = initialize(ds, affinities, hp, 1);
        std::vector<double> entries;
        for (Index i = 0; i < 4; ++i) entries.push_back(state.indicator.row(i).maxCoeff());
        std::sort(entries.begin(), entries.end());
        CHECK(entries[0] == doctest::Approx(1.0 / std::sqrt(3.0)));
        CHECK(entries[3] == doctest::Approx(1.0));
        CHECK((state.indicator.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("view-weight update with identical affinities splits evenly") {
    auto inst = random_instance(60, 12, 2, 2);
    inst.affinities[1] = inst.affinities[0];
    update_view_weights(inst.state, inst.affinities);
    CHECK(inst.state.view_weights(0) == doctest::Approx(0.5));
    CHECK(inst.state.view_weights(1) == doctest::Approx(0.5));
}
