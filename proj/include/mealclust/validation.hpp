#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mealclust/features.hpp"

namespace mealclust {

/// Davies-Bouldin index of a hard partition; lower is better.
///
/// Scatter is the mean Euclidean distance of members to their centroid.
/// With `exclude_noise`, rows labelled -1 are dropped first; otherwise a
/// negative label is an ArgumentError. Throws UndefinedDbiError when fewer
/// than two clusters remain or two centroids coincide.
double davies_bouldin(const FeatureMatrix& m, const std::vector<int>& labels,
                      bool exclude_noise = false);

enum class Algorithm { kmeans, gmm, dbscan };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& text);

struct SweepEntry {
    double param = 0.0;
    std::optional<double> dbi;  // empty when undefined
    int n_clusters = 0;
    int n_noise = 0;

    bool operator==(const SweepEntry&) const = default;
};

struct SweepReport {
    std::string household_id;
    Algorithm algorithm = Algorithm::kmeans;
    std::vector<SweepEntry> entries;  // in parameter order as swept
    std::size_t best = 0;             // index into entries
    std::uint64_t seed = 0;
    int min_pts = 0;  // dbscan only

    const SweepEntry& best_entry() const { return entries.at(best); }

    bool operator==(const SweepReport&) const = default;
};

/// Index of the entry with the lowest defined DBI, ties to the smallest
/// parameter. Throws SweepError if no entry is defined.
std::size_t select_best(const std::vector<SweepEntry>& entries);

/// Inclusive integer range parsed from "A..B" (or a single "A").
struct IntRange {
    int first = 2;
    int last = 10;
};

IntRange parse_int_range(const std::string& text);
std::vector<double> parse_eps_list(const std::string& text);  // "1,2,3" or "A..B"
std::vector<double> default_eps_values();                     // 1..10 step 1

SweepReport sweep_kmeans(const FeatureMatrix& m, IntRange k_range, std::uint64_t seed);
SweepReport sweep_gmm(const FeatureMatrix& m, IntRange g_range, std::uint64_t seed);
SweepReport sweep_dbscan(const FeatureMatrix& m, const std::vector<double>& eps_values,
                         int min_pts = 5);

void write_sweep_json(std::ostream& out, const SweepReport& report);
SweepReport read_sweep_json(std::istream& in);

/// `param,dbi,n_clusters,n_noise`, with an empty dbi field when undefined.
void write_plot_csv(std::ostream& out, const SweepReport& report);
std::vector<SweepEntry> read_plot_csv(std::istream& in);

}  // namespace mealclust
