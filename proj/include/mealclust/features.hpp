#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "mealclust/episodes.hpp"

namespace mealclust {

enum class FeatureMode { duration_only, duration_and_start_hour };
enum class Scaling { none, zscore };

FeatureMode parse_feature_mode(const std::string& text);  // "duration" | "duration+hour"
Scaling parse_scaling(const std::string& text);            // "none" | "zscore"
std::string to_string(FeatureMode mode);
std::string to_string(Scaling scaling);

/// N x D observations, one row per episode.
struct FeatureMatrix {
    Eigen::MatrixXd data;
    std::vector<std::string> feature_names;
    Scaling scaling = Scaling::none;
    // Per-column statistics used by zscore; empty when scaling == none.
    std::vector<double> means;
    std::vector<double> stddevs;

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index dims() const { return data.cols(); }

    /// Maps a value of column `col` back to raw units.
    double unscale(Eigen::Index col, double value) const;
    /// Whole matrix in raw units.
    Eigen::MatrixXd unscaled() const;
};

/// Wraps raw data. Throws ArgumentError on empty or non-finite input, or
/// when the name count differs from the column count.
FeatureMatrix make_feature_matrix(Eigen::MatrixXd data, std::vector<std::string> names = {});

FeatureMatrix build_features(const std::vector<ActivityEpisode>& episodes,
                             FeatureMode mode = FeatureMode::duration_and_start_hour);

/// Population z-scoring (divisor N). Constant columns become zeros with a
/// recorded stddev of 1. Scaling an already-scaled matrix is an error.
FeatureMatrix scale_features(const FeatureMatrix& m, Scaling method);

}  // namespace mealclust
