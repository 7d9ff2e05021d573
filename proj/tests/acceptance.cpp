// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mealclust/dbscan.hpp"
#include "mealclust/episodes.hpp"
#include "mealclust/errors.hpp"
#include "mealclust/events.hpp"
#include "mealclust/features.hpp"
#include "mealclust/gmm.hpp"
#include "mealclust/kmeans.hpp"
#include "mealclust/synth.hpp"
#include "mealclust/validation.hpp"
#include "test_support.hpp"

using namespace mealclust;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shared record of every M-step seen by any fit in this suite.
struct MStepAudit {
    std::mutex mu;
    long steps = 0;
    long violations = 0;
    double worst_sum_error = 0.0;

    GmmOptions options() {
        GmmOptions opt;
        opt.on_m_step = [this](const GmmParams& p) {
            const double err = std::abs(p.weights.sum() - 1.0);
            const bool bad = err > 1e-9 || p.weights.minCoeff() < 0.0 || p.weights.maxCoeff() > 1.0;
            std::lock_guard lock(mu);
            ++steps;
            violations += bad;
            worst_sum_error = std::max(worst_sum_error, err);
        };
        return opt;
    }
};

MStepAudit g_audit;

Outcome dbi_oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(2024);
    double worst = 0.0;
    int undefined_mismatch = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 199);
        const int d = 1 + static_cast<int>(gen() % 3);
        const int k = 2 + static_cast<int>(gen() % 5);
        const auto pts = testing::uniform_points(gen, std::max(n, k), d);
        std::vector<int> labels(pts.size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(gen() % k);
        labels[0] = 0;
        labels[1] = 1;
        const double ref = testing::oracle_dbi(pts, labels);
        try {
            worst = std::max(worst, std::abs(davies_bouldin(testing::to_matrix(pts), labels) - ref));
        } catch (const UndefinedDbiError&) {
            ++undefined_mismatch;
        }
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "max |lib - oracle| = %.3g over 200 instances, %.2f s", worst, elapsed);
    return {worst <= 1e-9 && undefined_mismatch == 0 && elapsed < 10.0, buf};
}

Outcome dbi_fixture() {
    const auto m = testing::to_matrix({{0, 0}, {0, 2}, {10, 0}, {10, 2}});
    const double v = davies_bouldin(m, {0, 0, 1, 1});
    char buf[96];
    std::snprintf(buf, sizeof buf, "DBI = %.17g", v);
    return {std::abs(v - 0.2) <= 1e-12, buf};
}

Outcome kmeans_descent() {
    std::mt19937_64 gen(7);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 10 + static_cast<int>(gen() % 190);
        const int d = 1 + static_cast<int>(gen() % 3);
        const int k = 1 + static_cast<int>(gen() % 8);
        const auto model = kmeans_fit(testing::to_matrix(testing::uniform_points(gen, n, d)), k, gen());
        for (std::size_t t = 1; t < model.inertia_trace.size(); ++t) {
            violations += model.inertia_trace[t] > model.inertia_trace[t - 1] + 1e-9;
        }
    }
    const auto distinct = testing::to_matrix(testing::uniform_points(gen, 25, 2));
    const double zero = kmeans_fit(distinct, 25, 3).inertia;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d descent violations in 100 fits; k=N inertia = %g", violations, zero);
    return {violations == 0 && zero == 0.0, buf};
}

Outcome em_monotonicity() {
    std::mt19937_64 gen(8);
    int violations = 0;
    double worst_drop = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + static_cast<int>(gen() % 3);
        const int n = 20 + static_cast<int>(gen() % 180);
        const int g = 1 + static_cast<int>(gen() % 6);
        testing::Points pts;
        // Mix of structured and uniform data.
        if (trial % 2 == 0) {
            Rng rng(gen());
            testing::Points centers;
            for (int c = 0; c < 3; ++c) centers.push_back(testing::uniform_points(gen, 1, d, 0.0, 20.0)[0]);
            pts = testing::gaussian_blobs(rng, centers, n / 3 + 1, 1.5).points;
        } else {
            pts = testing::uniform_points(gen, n, d);
        }
        const auto model = gmm_fit(testing::to_matrix(pts), g, gen(), g_audit.options());
        for (std::size_t t = 1; t < model.log_likelihood_trace.size(); ++t) {
            const double drop = model.log_likelihood_trace[t - 1] - model.log_likelihood_trace[t];
            worst_drop = std::max(worst_drop, drop);
            violations += drop > 1e-8;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d steps decreased by > 1e-8 in 100 fits (largest drop %.3g)",
                  violations, worst_drop);
    return {violations == 0, buf};
}

Outcome dbscan_reference() {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> eps_dist(0.2, 2.5);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 199);
        const auto pts = testing::uniform_points(gen, n, 1 + static_cast<int>(gen() % 2));
        const double eps = eps_dist(gen);
        const int min_pts = 1 + static_cast<int>(gen() % 7);
        const auto got = dbscan_fit(testing::to_matrix(pts), eps, min_pts);
        mismatches += !(testing::partition_of(got.labels) ==
                        testing::partition_of(testing::oracle_dbscan(pts, eps, min_pts)));
    }
    const auto pair = testing::to_matrix({{1.0, 1.0}, {4.0, 5.0}});
    const bool strict = eps_neighborhood(0, pair, 5.0).size() == 1 &&
                        dbscan_fit(pair, 5.0, 2).n_noise() == 2;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d partition mismatches in 100 instances; distance == eps excluded: %s",
                  mismatches, strict ? "yes" : "no");
    return {mismatches == 0 && strict, buf};
}

// Per-seed results for the synthetic-household criteria.
struct SeedRun {
    int kmeans_best = 0;
    int gmm_best = 0;
    std::vector<CategoryRow> categories;
};

SeedRun run_seed(std::uint64_t seed) {
    const auto trace = generate_trace(default_profile(365, seed));
    const auto episodes = segment_episodes(filter_meal_locations(trace.events, default_meal_locations()));
    const auto m = scale_features(build_features(episodes), Scaling::zscore);
    SeedRun r;
    r.kmeans_best = static_cast<int>(sweep_kmeans(m, {2, 10}, seed).best_entry().param);
    r.gmm_best = static_cast<int>(sweep_gmm(m, {2, 10}, seed).best_entry().param);
    r.categories = category_summary(gmm_fit(m, 4, seed, g_audit.options()), m);
    return r;
}

std::vector<SeedRun> g_runs;
double g_runs_seconds = 0.0;

void run_all_seeds() {
    const auto t0 = Clock::now();
    std::vector<std::future<SeedRun>> futures;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        futures.push_back(std::async(std::launch::async, run_seed, seed));
    }
    for (auto& f : futures) g_runs.push_back(f.get());
    g_runs_seconds = seconds_since(t0);
}

Outcome planted_k_recovery() {
    int km = 0, gm = 0;
    for (const auto& r : g_runs) {
        km += r.kmeans_best == 4;
        gm += r.gmm_best == 4;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "k-means k=4 in %d/50, GMM g=4 in %d/50 seeds, %.1f s", km, gm, g_runs_seconds);
    return {km >= 48 && gm >= 45 && g_runs_seconds < 60.0, buf};
}

Outcome category_means() {
    // Sorted planted means: snack 8, breakfast 15, lunch 30, dinner 35.
    const double planted[] = {8.0, 15.0, 30.0, 35.0};
    int failing = 0;
    double worst = 0.0;
    for (const auto& r : g_runs) {
        bool ok = r.categories.size() == 4;
        for (std::size_t i = 0; ok && i < 4; ++i) {
            const double rel = std::abs(r.categories[i].mean_duration_min - planted[i]) / planted[i];
            worst = std::max(worst, rel);
            ok = rel <= 0.10;
        }
        failing += !ok;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/50 seeds off; worst relative error %.4f", failing, worst);
    return {failing == 0, buf};
}

Outcome cli_determinism() {
    const std::string cli = MEALCLUST_CLI_PATH;
    const std::string profile = std::string(MEALCLUST_DATA_DIR) + "/default_profile.txt";
    const auto root = fs::temp_directory_path() / "mealclust_acceptance";
    fs::remove_all(root);
    std::string summaries[2];
    for (int run = 0; run < 2; ++run) {
        const auto out = root / ("run" + std::to_string(run));
        const std::string cmd = cli + " run --synth-profile " + profile + " --seed 7 --out " + out.string() +
                                " >/dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed"};
        std::ifstream in(out / "synth" / "summary.json", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        summaries[run] = ss.str();
    }
    const bool same = !summaries[0].empty() && summaries[0] == summaries[1];
    return {same, same ? "summary.json identical across two runs (" + std::to_string(summaries[0].size()) + " bytes)"
                       : "summary.json differs"};
}

Outcome weight_conservation() {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%ld M-steps audited, %ld violations, worst |sum - 1| = %.3g",
                  g_audit.steps, g_audit.violations, g_audit.worst_sum_error);
    return {g_audit.steps > 0 && g_audit.violations == 0, buf};
}

Outcome density_normalization() {
    const auto trace = generate_trace(default_profile(365, 5));
    const auto episodes = segment_episodes(filter_meal_locations(trace.events, default_meal_locations()));
    const auto m = build_features(episodes, FeatureMode::duration_only);
    const auto model = gmm_fit(m, 4, 5, g_audit.options());
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < 4; ++k) {
        const double sd = std::sqrt(model.params.covariances[static_cast<std::size_t>(k)](0, 0));
        lo = std::min(lo, model.params.means(k, 0) - 8.0 * sd);
        hi = std::max(hi, model.params.means(k, 0) + 8.0 * sd);
    }
    const int steps = 200000;
    const double h = (hi - lo) / steps;
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double f = gmm_density(Eigen::VectorXd::Constant(1, lo + h * i), model.params);
        integral += (i == 0 || i == steps) ? 0.5 * f : f;
    }
    integral *= h;
    char buf[128];
    std::snprintf(buf, sizeof buf, "integral over [%.2f, %.2f] = %.6f", lo, hi, integral);
    return {std::abs(integral - 1.0) <= 1e-3, buf};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"1 DBI oracle equivalence", dbi_oracle_equivalence},
        {"2 DBI hand-computed fixture", dbi_fixture},
        {"3 K-Means descent", kmeans_descent},
        {"4 EM monotonicity", em_monotonicity},
        {"5 DBSCAN reference equivalence", dbscan_reference},
        {"6 planted-k recovery", [] { run_all_seeds(); return planted_k_recovery(); }},
        {"7 category mean durations", category_means},
        {"8 CLI determinism", cli_determinism},
        {"9 GMM weight conservation", weight_conservation},
        {"10 GMM density normalization", density_normalization},
    };
    // Criterion 9 audits the fits of every other criterion, so it is
    // reported after they have all run.
    std::vector<std::pair<const Criterion*, Outcome>> results;
    for (const auto& c : criteria) {
        if (std::string(c.name).starts_with("9 ")) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        results.emplace_back(&c, o);
    }
    results.insert(results.begin() + 8, {&criteria[8], weight_conservation()});

    int failed = 0;
    for (const auto& [c, o] : results) {
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c->name, o.detail.c_str());
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
