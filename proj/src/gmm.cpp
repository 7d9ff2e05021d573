#include "mealclust/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mealclust/errors.hpp"
#include "mealclust/kmeans.hpp"
#include "text_util.hpp"

namespace mealclust {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_params(const GmmParams& params, Eigen::Index dims) {
    if (params.components() == 0) throw ArgumentError("GMM has no components");
    if (params.means.rows() != params.components() ||
        static_cast<int>(params.covariances.size()) != params.components()) {
        throw ArgumentError("GMM parameter arrays disagree on component count");
    }
    if (params.dims() != dims) {
        throw ArgumentError("GMM dimension mismatch (" + std::to_string(params.dims()) + " vs " +
                            std::to_string(dims) + ")");
    }
}

// Symmetric matrix with eigenvalues raised to at least `floor`. Among all
// covariances meeting that bound it is the one maximizing the Gaussian
// likelihood of the given scatter, so EM stays monotone.
Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& cov, double floor) {
    const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    if (eig.eigenvalues().minCoeff() >= floor) return sym;
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd out = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

// Cached Cholesky factors so the E-step does not refactor per point.
struct ComponentCache {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double log_norm = 0.0;  // -0.5 * (D log 2pi + log det)
};

std::vector<ComponentCache> factorize(const GmmParams& params) {
    std::vector<ComponentCache> cache(params.covariances.size());
    const double d = static_cast<double>(params.dims());
    for (std::size_t k = 0; k < cache.size(); ++k) {
        cache[k].llt.compute(params.covariances[k]);
        if (cache[k].llt.info() != Eigen::Success) {
            throw ArgumentError("GMM covariance " + std::to_string(k) + " is not positive definite");
        }
        const Eigen::MatrixXd& l = cache[k].llt.matrixL();
        const double log_det = 2.0 * l.diagonal().array().log().sum();
        cache[k].log_norm = -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det);
    }
    return cache;
}

double log_density_cached(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& mean,
                          const ComponentCache& c) {
    const Eigen::VectorXd z = c.llt.matrixL().solve(x - mean);
    return c.log_norm - 0.5 * z.squaredNorm();
}

// log(pi_k) + log F(x, theta_k) for every component.
Eigen::VectorXd weighted_log_densities(const Eigen::Ref<const Eigen::VectorXd>& x,
                                       const GmmParams& params,
                                       const std::vector<ComponentCache>& cache) {
    const int g = params.components();
    Eigen::VectorXd out(g);
    for (int k = 0; k < g; ++k) {
        const double w = params.weights(k);
        out(k) = w > 0.0 ? std::log(w) + log_density_cached(x, params.means.row(k).transpose(),
                                                            cache[static_cast<std::size_t>(k)])
                         : kNegInf;
    }
    return out;
}

double log_sum_exp(const Eigen::VectorXd& v) {
    const double top = v.maxCoeff();
    if (!std::isfinite(top)) return top;
    return top + std::log((v.array() - top).exp().sum());
}

struct EStep {
    Eigen::MatrixXd resp;  // N x g
    double log_likelihood = 0.0;
};

EStep expectation(const Eigen::MatrixXd& x, const GmmParams& params) {
    const auto cache = factorize(params);
    const int g = params.components();
    Eigen::MatrixXd lw(x.rows(), g);
    for (int k = 0; k < g; ++k) {
        const double w = params.weights(k);
        if (!(w > 0.0)) {
            lw.col(k).setConstant(kNegInf);
            continue;
        }
        const auto& c = cache[static_cast<std::size_t>(k)];
        const Eigen::MatrixXd z =
            c.llt.matrixL().solve((x.rowwise() - params.means.row(k)).transpose());
        lw.col(k) = ((std::log(w) + c.log_norm) - 0.5 * z.colwise().squaredNorm().array()).transpose();
    }
    EStep e;
    e.resp.resize(x.rows(), g);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::VectorXd row = lw.row(i).transpose();
        const double lse = log_sum_exp(row);
        e.log_likelihood += lse;
        e.resp.row(i) = (row.array() - lse).exp().matrix().transpose();
    }
    return e;
}

void maximization(const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp, double variance_floor,
                  GmmParams& params) {
    const int g = params.components();
    const Eigen::VectorXd mass = resp.colwise().sum().transpose();
    const double total = mass.sum();
    for (int k = 0; k < g; ++k) {
        params.weights(k) = mass(k) / total;
        // A component that lost all mass keeps its mean and covariance.
        if (!(mass(k) > 0.0)) continue;
        const Eigen::VectorXd mean = (resp.col(k).transpose() * x).transpose() / mass(k);
        const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
        const Eigen::MatrixXd weighted = centered.array().colwise() * resp.col(k).array();
        const Eigen::MatrixXd cov = (centered.transpose() * weighted) / mass(k);
        params.means.row(k) = mean.transpose();
        params.covariances[static_cast<std::size_t>(k)] = floor_eigenvalues(cov, variance_floor);
    }
}

std::vector<int> argmax_labels(const Eigen::MatrixXd& resp) {
    std::vector<int> labels(static_cast<std::size_t>(resp.rows()));
    for (Eigen::Index i = 0; i < resp.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < resp.cols(); ++k) {
            if (resp(i, k) > resp(i, best)) best = k;
        }
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return labels;
}

GmmParams initial_params(const FeatureMatrix& m, int g, std::uint64_t seed, double variance_floor) {
    const KMeansModel km = kmeans_fit(m, g, seed);
    const Eigen::MatrixXd& x = m.data;
    const Eigen::Index d = m.dims();
    GmmParams p;
    p.weights = Eigen::VectorXd::Zero(g);
    p.means = km.centroids;
    p.covariances.assign(static_cast<std::size_t>(g), Eigen::MatrixXd::Zero(d, d));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int l = km.labels[static_cast<std::size_t>(i)];
        const Eigen::VectorXd diff = x.row(i).transpose() - km.centroids.row(l).transpose();
        p.covariances[static_cast<std::size_t>(l)] += diff * diff.transpose();
        p.weights(l) += 1.0;
    }
    for (int k = 0; k < g; ++k) {
        auto& cov = p.covariances[static_cast<std::size_t>(k)];
        cov /= p.weights(k);
        cov = floor_eigenvalues(cov, variance_floor);
    }
    p.weights /= static_cast<double>(x.rows());
    return p;
}

}  // namespace

double component_log_density(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance) {
    if (x.size() != mean.size() || covariance.rows() != mean.size() ||
        covariance.cols() != mean.size()) {
        throw ArgumentError("component_log_density: dimension mismatch");
    }
    GmmParams single;
    single.weights = Eigen::VectorXd::Ones(1);
    single.means = mean.transpose();
    single.covariances = {covariance};
    const auto cache = factorize(single);
    return log_density_cached(x, mean, cache[0]);
}

double gmm_density(const Eigen::Ref<const Eigen::VectorXd>& x, const GmmParams& params) {
    check_params(params, x.size());
    const auto cache = factorize(params);
    return std::exp(log_sum_exp(weighted_log_densities(x, params, cache)));
}

Eigen::VectorXd responsibilities(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const GmmParams& params) {
    check_params(params, x.size());
    const auto cache = factorize(params);
    const Eigen::VectorXd lw = weighted_log_densities(x, params, cache);
    return (lw.array() - log_sum_exp(lw)).exp().matrix();
}

GmmModel gmm_fit(const FeatureMatrix& m, int g, std::uint64_t seed, const GmmOptions& options) {
    if (m.rows() < 2) throw ArgumentError("gmm_fit: need at least two rows");
    if (g < 1 || g > m.rows()) {
        throw ArgumentError("gmm_fit: g=" + std::to_string(g) + " outside [1, " +
                            std::to_string(m.rows()) + "]");
    }
    if (options.max_iter < 1) throw ArgumentError("gmm_fit: max_iter must be >= 1");
    if (options.tol < 0.0) throw ArgumentError("gmm_fit: tol must be >= 0");
    if (!(options.variance_floor > 0.0)) throw ArgumentError("gmm_fit: variance floor must be > 0");

    const Eigen::MatrixXd& x = m.data;
    GmmModel model;
    model.seed = seed;
    model.params = initial_params(m, g, seed, options.variance_floor);

    // A covariance that stops being positive definite mid-fit is a collapse.
    auto expect = [&](int iter) {
        try {
            return expectation(x, model.params);
        } catch (const ArgumentError& err) {
            throw FitError(iter, "gmm_fit: numerical collapse at iteration " +
                                     std::to_string(iter) + " (" + err.what() + ")");
        }
    };

    EStep e = expect(0);
    for (int iter = 0; iter < options.max_iter; ++iter) {
        if (!std::isfinite(e.log_likelihood) || !e.resp.allFinite()) {
            throw FitError(iter, "gmm_fit: numerical collapse at iteration " + std::to_string(iter));
        }
        model.log_likelihood_trace.push_back(e.log_likelihood);

        maximization(x, e.resp, options.variance_floor, model.params);
        if (options.on_m_step) options.on_m_step(model.params);
        model.iterations_run = iter + 1;

        const double previous = e.log_likelihood;
        e = expect(iter + 1);
        const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
        if ((e.log_likelihood - previous) / scale < options.tol) break;
    }
    if (!std::isfinite(e.log_likelihood) || !e.resp.allFinite()) {
        throw FitError(model.iterations_run, "gmm_fit: numerical collapse at iteration " +
                                                 std::to_string(model.iterations_run));
    }
    model.log_likelihood_trace.push_back(e.log_likelihood);
    model.log_likelihood = e.log_likelihood;
    model.labels = argmax_labels(e.resp);
    return model;
}

std::vector<CategoryRow> category_summary(const GmmModel& model, const FeatureMatrix& m) {
    check_params(model.params, m.dims());
    if (model.labels.size() != static_cast<std::size_t>(m.rows())) {
        throw ArgumentError("category_summary: model labels do not match feature rows");
    }
    if (m.feature_names.empty() || m.feature_names.front() != "duration_min") {
        throw ArgumentError("category_summary: feature column 0 must be duration_min");
    }
    const int g = model.params.components();
    std::vector<CategoryRow> rows(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
        auto& row = rows[static_cast<std::size_t>(k)];
        row.category = k;
        row.mean_duration_min = m.unscale(0, model.params.means(k, 0));
        row.weight = model.params.weights(k);
    }
    for (int l : model.labels) {
        if (l < 0 || l >= g) throw ArgumentError("category_summary: label out of range");
        ++rows[static_cast<std::size_t>(l)].count;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const CategoryRow& a, const CategoryRow& b) {
        return a.mean_duration_min < b.mean_duration_min;
    });
    return rows;
}

void write_categories_csv(std::ostream& out, const std::vector<CategoryRow>& rows) {
    out << "category,mean_duration_min,weight,count\n";
    for (const auto& r : rows) {
        out << r.category << ',' << detail::format_double(r.mean_duration_min) << ','
            << detail::format_double(r.weight) << ',' << r.count << '\n';
    }
}

std::vector<CategoryRow> read_categories_csv(std::istream& in) {
    std::string line;
    if (!detail::read_line(in, line) ||
        detail::trim(line) != "category,mean_duration_min,weight,count") {
        throw SchemaError("category", "categories CSV: unexpected header");
    }
    std::vector<CategoryRow> rows;
    while (detail::read_line(in, line)) {
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        if (f.size() != 4) throw ArgumentError("categories CSV: malformed row '" + line + "'");
        const auto cat = detail::parse_int<int>(f[0]);
        const auto mean = detail::parse_double(f[1]);
        const auto weight = detail::parse_double(f[2]);
        const auto count = detail::parse_int<int>(f[3]);
        if (!cat || !mean || !weight || !count) {
            throw ArgumentError("categories CSV: malformed row '" + line + "'");
        }
        rows.push_back({*cat, *mean, *weight, *count});
    }
    return rows;
}

}  // namespace mealclust
