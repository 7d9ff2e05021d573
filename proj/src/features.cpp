#include "mealclust/features.hpp"

#include <cmath>

#include "mealclust/errors.hpp"

namespace mealclust {

FeatureMode parse_feature_mode(const std::string& text) {
    if (text == "duration") return FeatureMode::duration_only;
    if (text == "duration+hour") return FeatureMode::duration_and_start_hour;
    throw ArgumentError("unknown feature mode '" + text + "' (expected duration|duration+hour)");
}

Scaling parse_scaling(const std::string& text) {
    if (text == "none") return Scaling::none;
    if (text == "zscore") return Scaling::zscore;
    throw ArgumentError("unknown scaling '" + text + "' (expected none|zscore)");
}

std::string to_string(FeatureMode mode) {
    return mode == FeatureMode::duration_only ? "duration" : "duration+hour";
}

std::string to_string(Scaling scaling) { return scaling == Scaling::none ? "none" : "zscore"; }

double FeatureMatrix::unscale(Eigen::Index col, double value) const {
    if (scaling == Scaling::none) return value;
    const auto c = static_cast<std::size_t>(col);
    return value * stddevs.at(c) + means.at(c);
}

Eigen::MatrixXd FeatureMatrix::unscaled() const {
    if (scaling == Scaling::none) return data;
    Eigen::MatrixXd raw = data;
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
        const auto i = static_cast<std::size_t>(c);
        raw.col(c) = (raw.col(c).array() * stddevs[i] + means[i]).matrix();
    }
    return raw;
}

FeatureMatrix make_feature_matrix(Eigen::MatrixXd data, std::vector<std::string> names) {
    if (data.rows() == 0 || data.cols() == 0) {
        throw ArgumentError("feature matrix must have at least one row and one column");
    }
    if (!data.allFinite()) throw ArgumentError("feature matrix contains NaN or infinite entries");
    if (names.empty()) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) names.push_back("x" + std::to_string(c));
    }
    if (static_cast<Eigen::Index>(names.size()) != data.cols()) {
        throw ArgumentError("feature name count does not match column count");
    }
    FeatureMatrix m;
    m.data = std::move(data);
    m.feature_names = std::move(names);
    return m;
}

FeatureMatrix build_features(const std::vector<ActivityEpisode>& episodes, FeatureMode mode) {
    if (episodes.empty()) throw ArgumentError("build_features: no episodes");
    const bool with_hour = mode == FeatureMode::duration_and_start_hour;
    Eigen::MatrixXd data(static_cast<Eigen::Index>(episodes.size()), with_hour ? 2 : 1);
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        data(r, 0) = episodes[i].duration_min;
        if (with_hour) data(r, 1) = episodes[i].start_hour;
    }
    std::vector<std::string> names{"duration_min"};
    if (with_hour) names.emplace_back("start_hour");
    return make_feature_matrix(std::move(data), std::move(names));
}

FeatureMatrix scale_features(const FeatureMatrix& m, Scaling method) {
    if (method == Scaling::none) return m;
    if (m.scaling != Scaling::none) throw ArgumentError("scale_features: matrix already scaled");
    if (m.rows() < 2) throw ArgumentError("scale_features: zscore needs at least two rows");

    FeatureMatrix out = m;
    out.scaling = Scaling::zscore;
    out.means.assign(static_cast<std::size_t>(m.dims()), 0.0);
    out.stddevs.assign(static_cast<std::size_t>(m.dims()), 1.0);
    const double n = static_cast<double>(m.rows());
    for (Eigen::Index c = 0; c < m.dims(); ++c) {
        const auto i = static_cast<std::size_t>(c);
        const double mean = m.data.col(c).sum() / n;
        const Eigen::ArrayXd centered = m.data.col(c).array() - mean;
        const double sd = std::sqrt(centered.square().sum() / n);
        out.means[i] = mean;
        const bool constant = m.data.col(c).maxCoeff() == m.data.col(c).minCoeff();
        if (!constant && sd > 0.0) {
            out.stddevs[i] = sd;
            out.data.col(c) = (centered / sd).matrix();
        } else {
            out.data.col(c).setZero();
        }
    }
    return out;
}

}  // namespace mealclust
