#include <doctest.h>

#include <cmath>
#include <random>

#include "mvfsgl/affinity.hpp"
#include "oracles.hpp"

using namespace mvfsgl;

TEST_CASE("collinear points, K=1: median width and kernel value by hand") {
    // positions 0..4 on a line; pairwise distances {1,1,1,1,2,2,2,3,3,4}, median 2
    Matrix<double> x(1, 5);
    x << 0, 1, 2, 3, 4;
    double sigma = 0;
    const auto raw = knn_gaussian_affinity(x, 1, &sigma);
    CHECK(sigma == doctest::Approx(2.0));
    CHECK(raw(0, 1) == doctest::Approx(std::exp(-1.0 / 8.0)));
    CHECK(raw(1, 0) == doctest::Approx(std::exp(-1.0 / 8.0)));
    CHECK(raw(0, 2) == 0.0);  // mutually outside each other's neighbor sets
    CHECK(raw(0, 4) == 0.0);
    CHECK(raw.diagonal().isZero());
}

TEST_CASE("coincident neighbors get kernel value one") {
    Matrix<double> x(2, 4);
    x << 0, 0, 5, 9, 0, 0, 5, 1;
    const auto raw = knn_gaussian_affinity(x, 1);
    CHECK(raw(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("raw affinity is symmetric with zero diagonal") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    Matrix<double> x(4, 20);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
    const auto raw = knn_gaussian_affinity(x, 3);
    CHECK((raw - raw.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(raw.diagonal().isZero());
    CHECK(raw.minCoeff() >= 0.0);
}

TEST_CASE("degenerate view is rejected") {
    Matrix<double> x = Matrix<double>::Ones(3, 6);
    CHECK_THROWS_WITH_AS(knn_gaussian_affinity(x, 2), doctest::Contains("degenerate"), std::runtime_error);
    CHECK_THROWS_AS(knn_gaussian_affinity(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(knn_gaussian_affinity(x, 6), std::invalid_argument);
}

TEST_CASE("row scaling examples") {
    Matrix<double> raw(3, 3);
    raw << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    SUBCASE("row already summing to V stays put") {
        Matrix<double> r(3, 3);
        r << 1, 1, 0, 1, 0, 1, 0, 1, 1;
        const auto g = scale_affinity(r, 2, AffinityMode::row_scaled);
        CHECK((g.matrix.row(0) - Eigen::RowVector3d(1, 1, 0)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("single-entry row scales to V") {
        Matrix<double> r(3, 3);
        r << 2, 0, 0, 0, 2, 0, 0, 0, 2;
        const auto g = scale_affinity(r, 3, AffinityMode::row_scaled);
        CHECK(g.matrix(0, 0) == doctest::Approx(3.0));
        CHECK(g.matrix(0, 1) == 0.0);
    }
    SUBCASE("row sums hit the view count within 1e-9") {
        const auto g = scale_affinity(raw, 5, AffinityMode::row_scaled);
        CHECK((g.matrix.rowwise().sum().array() - 5.0).abs().maxCoeff() <= 1e-9);
    }
    SUBCASE("zero row is an isolated-sample error") {
        Matrix<double> r = Matrix<double>::Zero(3, 3);
        r(0, 1) = 1;
        CHECK_THROWS_WITH_AS(scale_affinity(r, 2, AffinityMode::row_scaled), doctest::Contains("isolated"),
                             std::runtime_error);
    }
}

TEST_CASE("symmetric scaling preserves symmetry and total mass") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix<double> raw(6, 6);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 6; ++j) raw(i, j) = i == j ? 0.0 : unif(rng);
    const auto g = scale_affinity(raw, 3, AffinityMode::symmetric);
    CHECK((g.matrix - g.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.matrix.sum() == doctest::Approx(6.0 * 3.0).epsilon(1e-9));

    // already symmetric with total mass n*V: unchanged
    Matrix<double> sym = (raw + raw.transpose()) / 2.0;
    sym *= 6.0 * 3.0 / sym.sum();
    const auto g2 = scale_affinity(sym, 3, AffinityMode::symmetric);
    CHECK((g2.matrix - sym).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("affinity commutes with sample permutation") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    Matrix<double> x(3, 12);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);

    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix<double> xp(3, 12);
    for (int j = 0; j < 12; ++j) xp.col(perm[size_t(j)]) = x.col(j);

    const auto a = knn_gaussian_affinity(x, 3);
    const auto ap = knn_gaussian_affinity(xp, 3);
    double worst = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            worst = std::max(worst, std::abs(ap(perm[size_t(i)], perm[size_t(j)]) - a(i, j)));
    CHECK(worst <= 1e-14);
}

TEST_CASE("build_affinities names the offending view") {
    MultiViewDataset<double> ds;
    ds.views.push_back(Matrix<double>::Random(2, 8).cwiseAbs());
    ds.views.push_back(Matrix<double>::Ones(3, 8));
    ds.view_names = {"good.csv", "flat.csv"};
    CHECK_THROWS_WITH_AS(build_affinities(ds, 2, AffinityMode::row_scaled), doctest::Contains("flat.csv"),
                         std::runtime_error);
}
