#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "mealclust/errors.hpp"
#include "mealclust/kmeans.hpp"
#include "test_support.hpp"

using namespace mealclust;
using testing::Points;

TEST_CASE("euclidean distance") {
    CHECK(euclidean_distance(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 4)) == 5.0);
    CHECK(euclidean_distance(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 2, 3)) == 0.0);
    CHECK_THROWS_AS(euclidean_distance(Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)), ArgumentError);

    std::mt19937_64 gen(1);
    for (int i = 0; i < 20; ++i) {
        const auto pts = testing::uniform_points(gen, 2, 3, -100.0, 100.0);
        const Eigen::Vector3d a(pts[0][0], pts[0][1], pts[0][2]);
        const Eigen::Vector3d b(pts[1][0], pts[1][1], pts[1][2]);
        CHECK(std::abs(euclidean_distance(a, b) - testing::plain_distance(pts[0], pts[1])) < 1e-12);
    }
}

TEST_CASE("assign uses the nearest centroid and breaks ties low") {
    const auto m = testing::to_matrix({{0.0, 0.0}, {5.0, 5.0}});
    const Eigen::MatrixXd c{{-1.0, 0.0}, {1.0, 0.0}, {5.0, 5.0}};
    const auto labels = assign(m, c);
    CHECK(labels[0] == 0);
    CHECK(labels[1] == 2);
    CHECK_THROWS_AS(assign(m, Eigen::MatrixXd::Zero(2, 3)), ArgumentError);

    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = testing::uniform_points(gen, 60, 2);
        const auto cents = testing::uniform_points(gen, 5, 2);
        Eigen::MatrixXd cm(5, 2);
        for (int j = 0; j < 5; ++j) cm.row(j) << cents[j][0], cents[j][1];
        const auto got = assign(testing::to_matrix(pts), cm);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            int best = 0;
            for (int j = 1; j < 5; ++j) {
                if (testing::plain_distance(pts[i], cents[j]) <
                    testing::plain_distance(pts[i], cents[best])) {
                    best = j;
                }
            }
            CHECK(got[i] == best);
        }
    }
}

TEST_CASE("k = 1 gives the global mean and total squared deviation") {
    const auto m = testing::to_matrix({{1.0, 2.0}, {3.0, 6.0}, {5.0, 1.0}});
    const auto model = kmeans_fit(m, 1, 0);
    CHECK(model.centroids(0, 0) == doctest::Approx(3.0));
    CHECK(model.centroids(0, 1) == doctest::Approx(3.0));
    // (4 + 1) + (0 + 9) + (4 + 4)
    CHECK(model.inertia == doctest::Approx(22.0));
}

TEST_CASE("two separated pairs") {
    const auto m = testing::to_matrix({{0, 0}, {0, 1}, {100, 100}, {100, 101}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto model = kmeans_fit(m, 2, seed);
        const int a = model.labels[0];
        CHECK(model.labels[1] == a);
        CHECK(model.labels[2] == 1 - a);
        CHECK(model.centroids(a, 0) == 0.0);
        CHECK(model.centroids(a, 1) == 0.5);
        CHECK(model.centroids(1 - a, 0) == 100.0);
        CHECK(model.centroids(1 - a, 1) == 100.5);
        CHECK(model.inertia == doctest::Approx(1.0));
    }
}

TEST_CASE("planted centres are recovered over 50 seeds") {
    const Points centers{{0, 0}, {25, 0}, {0, 25}, {25, 25}};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(1000 + seed);
        const auto blobs = testing::gaussian_blobs(rng, centers, 100, 1.0);
        const auto model = kmeans_fit(testing::to_matrix(blobs.points), 4, seed);
        std::vector<bool> used(4, false);
        for (int c = 0; c < 4; ++c) {
            int match = -1;
            for (int j = 0; j < 4; ++j) {
                const double d = std::hypot(model.centroids(c, 0) - centers[j][0],
                                            model.centroids(c, 1) - centers[j][1]);
                if (d < 0.5) match = j;
            }
            REQUIRE(match >= 0);
            CHECK_FALSE(used[match]);
            used[match] = true;
        }
    }
}

TEST_CASE("structural properties") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto pts = testing::uniform_points(gen, 50, 2);
        const auto m = testing::to_matrix(pts);
        const int k = 2 + trial % 6;
        const auto model = kmeans_fit(m, k, static_cast<std::uint64_t>(trial));

        for (std::size_t t = 1; t < model.inertia_trace.size(); ++t) {
            CHECK(model.inertia_trace[t] <= model.inertia_trace[t - 1] + 1e-9);
        }
        // Centroids are the means of their members; no cluster is empty.
        for (int c = 0; c < k; ++c) {
            Eigen::RowVector2d sum(0, 0);
            int n = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (model.labels[i] == c) {
                    sum += m.data.row(static_cast<Eigen::Index>(i));
                    ++n;
                }
            }
            REQUIRE(n > 0);
            CHECK((model.centroids.row(c) - sum / n).norm() < 1e-9);
        }
        // Permuting centroid ids leaves inertia unchanged.
        double permuted = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const int l = (model.labels[i] + 1) % k;
            const Eigen::Index src = (l + k - 1) % k;
            permuted += (m.data.row(static_cast<Eigen::Index>(i)) - model.centroids.row(src)).squaredNorm();
        }
        CHECK(permuted == doctest::Approx(model.inertia).epsilon(1e-12));

        const auto again = kmeans_fit(m, k, static_cast<std::uint64_t>(trial));
        CHECK(again.labels == model.labels);
        CHECK(again.centroids == model.centroids);
    }
}

TEST_CASE("k = N distinct points gives zero inertia") {
    std::mt19937_64 gen(4);
    const auto m = testing::to_matrix(testing::uniform_points(gen, 12, 2));
    CHECK(kmeans_fit(m, 12, 7).inertia == 0.0);
}

TEST_CASE("duplicated points still yield k clusters") {
    const auto m = testing::to_matrix({{1, 1}, {1, 1}, {1, 1}, {2, 2}});
    const auto model = kmeans_fit(m, 3, 0);
    std::vector<int> seen = model.labels;
    std::sort(seen.begin(), seen.end());
    CHECK(std::unique(seen.begin(), seen.end()) - seen.begin() == 3);
}

TEST_CASE("argument errors") {
    const auto m = testing::to_matrix({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(kmeans_fit(m, 0, 0), ArgumentError);
    CHECK_THROWS_AS(kmeans_fit(m, 3, 0), ArgumentError);
    CHECK_THROWS_AS(kmeans_fit(m, 1, 0, {0, 1e-6}), ArgumentError);
    CHECK_THROWS_AS(kmeans_fit(m, 1, 0, {10, -1.0}), ArgumentError);
}
