#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <istream>
#include <vector>

#include <Eigen/Core>

#include "mealclust/features.hpp"

namespace mealclust {

/// Mixture parameters: weights, means and full covariances of g components.
struct GmmParams {
    Eigen::VectorXd weights;                   // g
    Eigen::MatrixXd means;                     // g x D
    std::vector<Eigen::MatrixXd> covariances;  // g matrices, D x D

    int components() const { return static_cast<int>(weights.size()); }
    Eigen::Index dims() const { return means.cols(); }
};

struct GmmModel {
    GmmParams params;
    std::vector<int> labels;  // argmax responsibility per row
    double log_likelihood = 0.0;
    int iterations_run = 0;
    std::uint64_t seed = 0;
    /// Log-likelihood evaluated before every M-step and once at the end.
    std::vector<double> log_likelihood_trace;
};

struct GmmOptions {
    int max_iter = 200;
    double tol = 1e-6;  // relative log-likelihood improvement
    double variance_floor = 1e-6;
    /// Optional hook called after each M-step with the new parameters.
    std::function<void(const GmmParams&)> on_m_step;
};

/// Mixture density at x: sum over components of weight times normal pdf.
double gmm_density(const Eigen::Ref<const Eigen::VectorXd>& x, const GmmParams& params);

/// Log of a single component's normal density.
double component_log_density(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);

/// Posterior component probabilities for x, computed in log space.
Eigen::VectorXd responsibilities(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const GmmParams& params);

/// Expectation-maximization seeded from k-means with k = g and the same seed.
///
/// Covariance eigenvalues are clipped from below at the variance floor,
/// which keeps every M-step a constrained maximizer so the log-likelihood
/// never decreases.
GmmModel gmm_fit(const FeatureMatrix& m, int g, std::uint64_t seed,
                 const GmmOptions& options = {});

struct CategoryRow {
    int category = 0;  // component index in the model
    double mean_duration_min = 0.0;
    double weight = 0.0;
    int count = 0;

    bool operator==(const CategoryRow&) const = default;
};

/// One row per component with its mean duration in minutes (raw units even
/// when `m` is z-scored), sorted ascending by that duration.
std::vector<CategoryRow> category_summary(const GmmModel& model, const FeatureMatrix& m);

void write_categories_csv(std::ostream& out, const std::vector<CategoryRow>& rows);
std::vector<CategoryRow> read_categories_csv(std::istream& in);

}  // namespace mealclust
