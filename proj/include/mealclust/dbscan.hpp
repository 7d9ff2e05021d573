#pragma once

#include <vector>

#include "mealclust/features.hpp"

namespace mealclust {

inline constexpr int kNoise = -1;

struct DbscanResult {
    double eps = 0.0;
    int min_pts = 0;
    std::vector<int> labels;  // cluster id, or kNoise
    std::vector<bool> core;
    int n_clusters = 0;

    int n_noise() const;
};

/// Rows strictly closer than eps to row p, p included, in ascending order.
std::vector<int> eps_neighborhood(int p, const FeatureMatrix& m, double eps);

/// Density-based clustering over the strict eps-neighborhood.
///
/// Rows with at least min_pts neighbours (themselves included) are cores.
/// Clusters are grown from cores in ascending index order; a border row
/// joins the first cluster that reaches it.
DbscanResult dbscan_fit(const FeatureMatrix& m, double eps, int min_pts = 5);

}  // namespace mealclust
