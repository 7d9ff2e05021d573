#include "mealclust/kmeans.hpp"

#include <cmath>
#include <limits>

#include "mealclust/errors.hpp"
#include "mealclust/random.hpp"

namespace mealclust {

namespace {

double squared_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b) {
    return (a - b).squaredNorm();
}

// Index drawn with probability proportional to weight; uniform if all zero.
Eigen::Index weighted_pick(const Eigen::VectorXd& weight, double total, Rng& rng) {
    if (!(total > 0.0)) return static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(weight.size())));
    const double target = rng.uniform() * total;
    double acc = 0.0;
    Eigen::Index pick = -1;
    for (Eigen::Index i = 0; i < weight.size(); ++i) {
        if (weight(i) <= 0.0) continue;
        acc += weight(i);
        pick = i;
        if (acc > target) break;
    }
    return pick;
}

// Greedy distance-weighted seeding: at each step several candidates are drawn
// with probability proportional to squared distance to the nearest chosen
// centroid, and the one leaving the smallest total squared distance is kept.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& x, int k, Rng& rng) {
    const Eigen::Index n = x.rows();
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    Eigen::MatrixXd centroids(k, x.cols());
    auto first = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
    centroids.row(0) = x.row(first);

    auto distances_to = [&](Eigen::Index row) {
        Eigen::VectorXd d(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            d(i) = squared_distance(x.row(i).transpose(), x.row(row).transpose());
        }
        return d;
    };
    Eigen::VectorXd nearest = distances_to(first);
    for (int c = 1; c < k; ++c) {
        const double total = nearest.sum();
        Eigen::Index best = -1;
        Eigen::VectorXd best_nearest;
        double best_potential = std::numeric_limits<double>::infinity();
        for (int t = 0; t < trials; ++t) {
            const Eigen::Index candidate = weighted_pick(nearest, total, rng);
            Eigen::VectorXd updated = nearest.cwiseMin(distances_to(candidate));
            const double potential = updated.sum();
            if (potential < best_potential) {
                best_potential = potential;
                best = candidate;
                best_nearest = std::move(updated);
            }
        }
        centroids.row(c) = x.row(best);
        nearest = std::move(best_nearest);
    }
    return centroids;
}

std::vector<int> nearest_labels(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids) {
    std::vector<int> labels(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
            const double d = euclidean_distance(x.row(i).transpose(), centroids.row(j).transpose());
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

double inertia_of(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids,
                  const std::vector<int>& labels) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        total += squared_distance(x.row(i).transpose(),
                                  centroids.row(labels[static_cast<std::size_t>(i)]).transpose());
    }
    return total;
}

// Gives each empty cluster the point farthest from its own centroid, taken
// from a cluster that keeps at least one member.
void repair_empty_clusters(const Eigen::MatrixXd& x, Eigen::MatrixXd& centroids,
                           std::vector<int>& labels) {
    const int k = static_cast<int>(centroids.rows());
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];

    for (int c = 0; c < k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > 0) continue;
        Eigen::Index donor = -1;
        double donor_d = -1.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const int l = labels[static_cast<std::size_t>(i)];
            if (sizes[static_cast<std::size_t>(l)] < 2) continue;
            const double d = squared_distance(x.row(i).transpose(), centroids.row(l).transpose());
            if (d > donor_d) {
                donor_d = d;
                donor = i;
            }
        }
        // k <= N guarantees a donor while any cluster is empty.
        const auto di = static_cast<std::size_t>(donor);
        --sizes[static_cast<std::size_t>(labels[di])];
        labels[di] = c;
        sizes[static_cast<std::size_t>(c)] = 1;
        centroids.row(c) = x.row(donor);
    }
}

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& x, const std::vector<int>& labels, int k) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        sums.row(l) += x.row(i);
        counts(l) += 1.0;
    }
    for (int c = 0; c < k; ++c) sums.row(c) /= counts(c);
    return sums;
}

}  // namespace

double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size()) {
        throw ArgumentError("euclidean_distance: dimension mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
    }
    return std::sqrt(squared_distance(a, b));
}

std::vector<int> assign(const FeatureMatrix& m, const Eigen::MatrixXd& centroids) {
    if (centroids.cols() != m.dims()) throw ArgumentError("assign: dimension mismatch");
    if (centroids.rows() == 0) throw ArgumentError("assign: no centroids");
    return nearest_labels(m.data, centroids);
}

KMeansModel kmeans_fit(const FeatureMatrix& m, int k, std::uint64_t seed,
                       const KMeansOptions& options) {
    if (k < 1 || k > m.rows()) {
        throw ArgumentError("kmeans_fit: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(m.rows()) + "]");
    }
    if (options.max_iter < 1) throw ArgumentError("kmeans_fit: max_iter must be >= 1");
    if (options.tol < 0.0) throw ArgumentError("kmeans_fit: tol must be >= 0");

    const Eigen::MatrixXd& x = m.data;
    Rng rng(seed);
    KMeansModel model;
    model.k = k;
    model.seed = seed;
    model.centroids = seed_centroids(x, k, rng);

    for (int iter = 0; iter < options.max_iter; ++iter) {
        model.labels = nearest_labels(x, model.centroids);
        repair_empty_clusters(x, model.centroids, model.labels);
        model.inertia_trace.push_back(inertia_of(x, model.centroids, model.labels));

        Eigen::MatrixXd updated = cluster_means(x, model.labels, k);
        const double shift = (updated - model.centroids).rowwise().norm().maxCoeff();
        model.centroids = std::move(updated);
        model.iterations_run = iter + 1;
        if (shift < options.tol) break;
    }
    model.inertia = inertia_of(x, model.centroids, model.labels);
    model.inertia_trace.push_back(model.inertia);
    return model;
}

}  // namespace mealclust
