#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "mealclust/features.hpp"

namespace mealclust {

/// Straight-line distance between two points of equal dimension.
double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b);

struct KMeansModel {
    int k = 0;
    Eigen::MatrixXd centroids;  // k x D
    std::vector<int> labels;
    double inertia = 0.0;
    int iterations_run = 0;
    std::uint64_t seed = 0;
    /// Sum of squared distances after every assignment step, then once more
    /// for the final centroids. Non-increasing.
    std::vector<double> inertia_trace;
};

struct KMeansOptions {
    int max_iter = 300;
    double tol = 1e-6;  // on the largest centroid displacement
};

/// Nearest centroid for every row; ties go to the lowest centroid index.
std::vector<int> assign(const FeatureMatrix& m, const Eigen::MatrixXd& centroids);

/// Lloyd's algorithm from a distance-weighted seeding.
///
/// A cluster that empties during an iteration takes over the point lying
/// farthest from its own centroid, so the result always has exactly k
/// non-empty clusters. Deterministic for a given (data, k, seed).
KMeansModel kmeans_fit(const FeatureMatrix& m, int k, std::uint64_t seed,
                       const KMeansOptions& options = {});

}  // namespace mealclust
