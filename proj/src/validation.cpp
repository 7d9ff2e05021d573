#include "mealclust/validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "mealclust/dbscan.hpp"
#include "mealclust/errors.hpp"
#include "mealclust/gmm.hpp"
#include "mealclust/kmeans.hpp"
#include "text_util.hpp"

namespace mealclust {

double davies_bouldin(const FeatureMatrix& m, const std::vector<int>& labels, bool exclude_noise) {
    if (labels.size() != static_cast<std::size_t>(m.rows())) {
        throw ArgumentError("davies_bouldin: label count does not match row count");
    }
    // Cluster id -> member rows, ordered by id.
    std::map<int, std::vector<Eigen::Index>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int l = labels[i];
        if (l < 0) {
            if (exclude_noise && l == kNoise) continue;
            throw ArgumentError("davies_bouldin: negative label " + std::to_string(l));
        }
        members[l].push_back(static_cast<Eigen::Index>(i));
    }
    const auto k = static_cast<Eigen::Index>(members.size());
    if (k < 2) {
        throw UndefinedDbiError("davies_bouldin: need at least two clusters, got " +
                                std::to_string(k));
    }

    Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, m.dims());
    Eigen::VectorXd scatter = Eigen::VectorXd::Zero(k);
    Eigen::Index c = 0;
    for (const auto& [id, rows] : members) {
        for (auto r : rows) centroids.row(c) += m.data.row(r);
        centroids.row(c) /= static_cast<double>(rows.size());
        for (auto r : rows) {
            scatter(c) += euclidean_distance(m.data.row(r).transpose(), centroids.row(c).transpose());
        }
        scatter(c) /= static_cast<double>(rows.size());
        ++c;
    }

    double total = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        double worst = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i == j) continue;
            const double sep =
                euclidean_distance(centroids.row(i).transpose(), centroids.row(j).transpose());
            if (sep == 0.0) {
                throw UndefinedDbiError("davies_bouldin: two clusters share a centroid");
            }
            worst = std::max(worst, (scatter(i) + scatter(j)) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::gmm: return "gmm";
        case Algorithm::dbscan: return "dbscan";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& text) {
    if (text == "kmeans") return Algorithm::kmeans;
    if (text == "gmm") return Algorithm::gmm;
    if (text == "dbscan") return Algorithm::dbscan;
    throw ArgumentError("unknown algorithm '" + text + "'");
}

std::size_t select_best(const std::vector<SweepEntry>& entries) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!e.dbi) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = entries[*best];
        if (*e.dbi < *b.dbi || (*e.dbi == *b.dbi && e.param < b.param)) best = i;
    }
    if (!best) throw SweepError("no valid clustering in range");
    return *best;
}

IntRange parse_int_range(const std::string& text) {
    const auto bad = [&] { return ArgumentError("invalid range '" + text + "' (expected A..B)"); };
    const auto dots = text.find("..");
    IntRange r;
    if (dots == std::string::npos) {
        const auto v = detail::parse_int<int>(text);
        if (!v) throw bad();
        r.first = r.last = *v;
    } else {
        const auto a = detail::parse_int<int>(std::string_view(text).substr(0, dots));
        const auto b = detail::parse_int<int>(std::string_view(text).substr(dots + 2));
        if (!a || !b) throw bad();
        r.first = *a;
        r.last = *b;
    }
    if (r.first > r.last) throw bad();
    return r;
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos && text.find(',') == std::string::npos) {
        const auto r = parse_int_range(text);
        for (int v = r.first; v <= r.last; ++v) out.push_back(v);
    } else {
        for (auto piece : detail::split(text)) {
            const auto v = detail::parse_double(piece);
            if (!v) throw ArgumentError("invalid eps value '" + std::string(piece) + "'");
            out.push_back(*v);
        }
    }
    for (double e : out) {
        if (!(e > 0.0)) throw ArgumentError("eps values must be positive");
    }
    if (out.empty()) throw ArgumentError("empty eps list");
    return out;
}

std::vector<double> default_eps_values() {
    std::vector<double> v;
    for (int e = 1; e <= 10; ++e) v.push_back(e);
    return v;
}

namespace {

void check_cluster_range(const FeatureMatrix& m, IntRange r, const char* what) {
    if (r.first > r.last || r.first < 2 || r.last > m.rows() - 1) {
        throw ArgumentError(std::string(what) + ": range " + std::to_string(r.first) + ".." +
                            std::to_string(r.last) + " outside [2, " +
                            std::to_string(m.rows() - 1) + "]");
    }
}

int distinct_non_noise(const std::vector<int>& labels) {
    std::vector<int> ids;
    for (int l : labels) {
        if (l >= 0) ids.push_back(l);
    }
    std::sort(ids.begin(), ids.end());
    return static_cast<int>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

SweepEntry score(const FeatureMatrix& m, double param, const std::vector<int>& labels,
                 bool exclude_noise) {
    SweepEntry e;
    e.param = param;
    e.n_clusters = distinct_non_noise(labels);
    e.n_noise = static_cast<int>(std::count(labels.begin(), labels.end(), kNoise));
    try {
        e.dbi = davies_bouldin(m, labels, exclude_noise);
    } catch (const UndefinedDbiError&) {
        e.dbi.reset();
    }
    return e;
}

}  // namespace

SweepReport sweep_kmeans(const FeatureMatrix& m, IntRange k_range, std::uint64_t seed) {
    check_cluster_range(m, k_range, "sweep_kmeans");
    SweepReport report;
    report.algorithm = Algorithm::kmeans;
    report.seed = seed;
    for (int k = k_range.first; k <= k_range.last; ++k) {
        const auto model = kmeans_fit(m, k, seed);
        report.entries.push_back(score(m, k, model.labels, false));
    }
    report.best = select_best(report.entries);
    return report;
}

SweepReport sweep_gmm(const FeatureMatrix& m, IntRange g_range, std::uint64_t seed) {
    check_cluster_range(m, g_range, "sweep_gmm");
    SweepReport report;
    report.algorithm = Algorithm::gmm;
    report.seed = seed;
    for (int g = g_range.first; g <= g_range.last; ++g) {
        // Components that win no point simply do not appear in the labels.
        const auto model = gmm_fit(m, g, seed);
        report.entries.push_back(score(m, g, model.labels, false));
    }
    report.best = select_best(report.entries);
    return report;
}

SweepReport sweep_dbscan(const FeatureMatrix& m, const std::vector<double>& eps_values,
                         int min_pts) {
    if (eps_values.empty()) throw ArgumentError("sweep_dbscan: no eps values");
    SweepReport report;
    report.algorithm = Algorithm::dbscan;
    report.min_pts = min_pts;
    for (double eps : eps_values) {
        const auto result = dbscan_fit(m, eps, min_pts);
        report.entries.push_back(score(m, eps, result.labels, true));
    }
    report.best = select_best(report.entries);
    return report;
}

void write_sweep_json(std::ostream& out, const SweepReport& report) {
    nlohmann::ordered_json j;
    j["household_id"] = report.household_id;
    j["algorithm"] = to_string(report.algorithm);
    j["seed"] = report.seed;
    if (report.algorithm == Algorithm::dbscan) j["min_pts"] = report.min_pts;
    auto entry_json = [](const SweepEntry& e) {
        nlohmann::ordered_json ej;
        ej["param"] = e.param;
        ej["dbi"] = e.dbi ? nlohmann::ordered_json(*e.dbi) : nlohmann::ordered_json(nullptr);
        ej["n_clusters"] = e.n_clusters;
        ej["n_noise"] = e.n_noise;
        return ej;
    };
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) j["entries"].push_back(entry_json(e));
    j["best_index"] = report.best;
    j["best"] = entry_json(report.best_entry());
    out << j.dump(2) << '\n';
}

SweepReport read_sweep_json(std::istream& in) {
    const auto j = nlohmann::json::parse(in);
    SweepReport r;
    r.household_id = j.at("household_id").get<std::string>();
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.min_pts = j.value("min_pts", 0);
    for (const auto& ej : j.at("entries")) {
        SweepEntry e;
        e.param = ej.at("param").get<double>();
        if (!ej.at("dbi").is_null()) e.dbi = ej.at("dbi").get<double>();
        e.n_clusters = ej.at("n_clusters").get<int>();
        e.n_noise = ej.at("n_noise").get<int>();
        r.entries.push_back(e);
    }
    r.best = j.at("best_index").get<std::size_t>();
    if (r.best >= r.entries.size()) throw ArgumentError("sweep JSON: best_index out of range");
    return r;
}

void write_plot_csv(std::ostream& out, const SweepReport& report) {
    out << "param,dbi,n_clusters,n_noise\n";
    for (const auto& e : report.entries) {
        out << detail::format_double(e.param) << ',' << (e.dbi ? detail::format_double(*e.dbi) : "")
            << ',' << e.n_clusters << ',' << e.n_noise << '\n';
    }
}

std::vector<SweepEntry> read_plot_csv(std::istream& in) {
    std::string line;
    if (!detail::read_line(in, line) || detail::trim(line) != "param,dbi,n_clusters,n_noise") {
        throw SchemaError("param", "plot CSV: unexpected header");
    }
    std::vector<SweepEntry> entries;
    while (detail::read_line(in, line)) {
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        const auto bad = [&] { return ArgumentError("plot CSV: malformed row '" + line + "'"); };
        if (f.size() != 4) throw bad();
        SweepEntry e;
        const auto param = detail::parse_double(f[0]);
        const auto clusters = detail::parse_int<int>(f[2]);
        const auto noise = detail::parse_int<int>(f[3]);
        if (!param || !clusters || !noise) throw bad();
        e.param = *param;
        if (!detail::trim(f[1]).empty()) {
            e.dbi = detail::parse_double(f[1]);
            if (!e.dbi) throw bad();
        }
        e.n_clusters = *clusters;
        e.n_noise = *noise;
        entries.push_back(e);
    }
    return entries;
}

}  // namespace mealclust
