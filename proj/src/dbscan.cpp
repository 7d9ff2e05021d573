#include "mealclust/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "mealclust/errors.hpp"
#include "mealclust/kmeans.hpp"

namespace mealclust {

namespace {

constexpr int kUnvisited = -2;

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ArgumentError("eps must be a positive finite number");
    }
}

std::vector<int> neighborhood(const Eigen::MatrixXd& x, Eigen::Index p, double eps) {
    std::vector<int> out;
    for (Eigen::Index q = 0; q < x.rows(); ++q) {
        // Strict: a point at exactly eps is not a neighbour.
        if (euclidean_distance(x.row(p).transpose(), x.row(q).transpose()) < eps) {
            out.push_back(static_cast<int>(q));
        }
    }
    return out;
}

}  // namespace

int DbscanResult::n_noise() const {
    return static_cast<int>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<int> eps_neighborhood(int p, const FeatureMatrix& m, double eps) {
    check_eps(eps);
    if (p < 0 || p >= m.rows()) throw ArgumentError("eps_neighborhood: row index out of range");
    return neighborhood(m.data, p, eps);
}

DbscanResult dbscan_fit(const FeatureMatrix& m, double eps, int min_pts) {
    check_eps(eps);
    if (min_pts < 1) throw ArgumentError("dbscan_fit: min_pts must be >= 1");

    const Eigen::Index n = m.rows();
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
    DbscanResult result;
    result.eps = eps;
    result.min_pts = min_pts;
    result.core.assign(static_cast<std::size_t>(n), false);
    for (Eigen::Index p = 0; p < n; ++p) {
        const auto i = static_cast<std::size_t>(p);
        neighbors[i] = neighborhood(m.data, p, eps);
        result.core[i] = static_cast<int>(neighbors[i].size()) >= min_pts;
    }

    result.labels.assign(static_cast<std::size_t>(n), kUnvisited);
    int cluster = 0;
    for (std::size_t p = 0; p < result.labels.size(); ++p) {
        if (result.labels[p] != kUnvisited || !result.core[p]) continue;
        result.labels[p] = cluster;
        std::deque<int> queue(neighbors[p].begin(), neighbors[p].end());
        while (!queue.empty()) {
            const auto q = static_cast<std::size_t>(queue.front());
            queue.pop_front();
            if (result.labels[q] != kUnvisited) continue;
            result.labels[q] = cluster;
            if (result.core[q]) queue.insert(queue.end(), neighbors[q].begin(), neighbors[q].end());
        }
        ++cluster;
    }
    std::replace(result.labels.begin(), result.labels.end(), kUnvisited, kNoise);
    result.n_clusters = cluster;
    return result;
}

}  // namespace mealclust
