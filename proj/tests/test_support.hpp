#pragma once

// Generators and brute-force reference implementations shared by the unit
// and acceptance suites. The references deliberately avoid the library's
// own helpers (distance, means, neighbourhoods) so they check it
// independently.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "mealclust/features.hpp"
#include "mealclust/random.hpp"

namespace testing {

using Points = std::vector<std::vector<double>>;

inline mealclust::FeatureMatrix to_matrix(const Points& pts) {
    Eigen::MatrixXd data(static_cast<Eigen::Index>(pts.size()),
                         static_cast<Eigen::Index>(pts.front().size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t d = 0; d < pts[i].size(); ++d) {
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = pts[i][d];
        }
    }
    return mealclust::make_feature_matrix(std::move(data));
}

inline Points uniform_points(std::mt19937_64& gen, int n, int dims, double lo = 0.0,
                             double hi = 10.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Points pts(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dims)));
    for (auto& p : pts) {
        for (auto& v : p) v = u(gen);
    }
    return pts;
}

/// Isotropic Gaussian blobs; returns points and the blob index of each.
struct Blobs {
    Points points;
    std::vector<int> truth;
};

inline Blobs gaussian_blobs(mealclust::Rng& rng, const Points& centers, int per_blob, double sd) {
    Blobs b;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (int i = 0; i < per_blob; ++i) {
            std::vector<double> p;
            for (double mu : centers[c]) p.push_back(rng.normal(mu, sd));
            b.points.push_back(std::move(p));
            b.truth.push_back(static_cast<int>(c));
        }
    }
    return b;
}

inline double plain_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

/// Davies-Bouldin written straight from its definition. Labels < 0 are
/// ignored. Returns NaN when fewer than two clusters exist.
inline double oracle_dbi(const Points& pts, const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0) groups[labels[i]].push_back(i);
    }
    if (groups.size() < 2) return std::nan("");
    const std::size_t dims = pts.front().size();
    std::vector<std::vector<double>> centers;
    std::vector<double> scatter;
    for (const auto& [id, idx] : groups) {
        std::vector<double> c(dims, 0.0);
        for (auto i : idx) {
            for (std::size_t d = 0; d < dims; ++d) c[d] += pts[i][d];
        }
        for (auto& v : c) v /= static_cast<double>(idx.size());
        double s = 0.0;
        for (auto i : idx) s += plain_distance(pts[i], c);
        centers.push_back(c);
        scatter.push_back(s / static_cast<double>(idx.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double worst = -1.0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            if (i != j) {
                worst = std::max(worst, (scatter[i] + scatter[j]) / plain_distance(centers[i], centers[j]));
            }
        }
        sum += worst;
    }
    return sum / static_cast<double>(centers.size());
}

/// DBSCAN by graph components: cores are linked when strictly closer than
/// eps; a border point joins the component (among those with a core in
/// reach) whose smallest core index is lowest. Noise is -1.
inline std::vector<int> oracle_dbscan(const Points& pts, double eps, int min_pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<bool>> near(n, std::vector<bool>(n));
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) {
        int count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            near[i][j] = plain_distance(pts[i], pts[j]) < eps;
            count += near[i][j];
        }
        core[i] = count >= min_pts;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (core[i] && core[j] && near[i][j]) {
                const auto a = find(i), b = find(j);
                parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    // Component root is its smallest index, which is also its smallest core.
    std::vector<long> comp(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) comp[i] = static_cast<long>(find(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) continue;
        long best = -1;
        for (std::size_t j = 0; j < n; ++j) {
            if (core[j] && near[i][j] && (best < 0 || static_cast<long>(find(j)) < best)) {
                best = static_cast<long>(find(j));
            }
        }
        comp[i] = best;
    }
    // Clusters are numbered in ascending order of their smallest core.
    std::map<long, int> ids;
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) ids.emplace(comp[i], 0);
    }
    int next = 0;
    for (auto& [root, id] : ids) id = next++;
    std::vector<int> labels(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0) labels[i] = ids.at(comp[i]);
    }
    return labels;
}

/// Partition as a set of member sets plus the noise set, for comparisons
/// that ignore cluster numbering.
struct Partition {
    std::set<std::set<std::size_t>> clusters;
    std::set<std::size_t> noise;
    bool operator==(const Partition&) const = default;
};

inline Partition partition_of(const std::vector<int>& labels) {
    std::map<int, std::set<std::size_t>> groups;
    Partition p;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            p.noise.insert(i);
        } else {
            groups[labels[i]].insert(i);
        }
    }
    for (auto& [id, members] : groups) p.clusters.insert(members);
    return p;
}

}  // namespace testing
