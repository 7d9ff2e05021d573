#include "mealclust/pipeline.hpp"

#include <fstream>
#include <future>
#include <map>

#include "mealclust/errors.hpp"
#include "mealclust/synth.hpp"

namespace mealclust {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (input_path.empty() == synth_profile_path.empty()) {
        throw ArgumentError("exactly one of --input or --synth-profile is required");
    }
    if (output_dir.empty()) throw ArgumentError("--out is required");
    if (locations.empty()) throw ArgumentError("--locations must name at least one location");
    if (!(segment.gap_threshold_min > 0.0)) throw ArgumentError("--gap-min must be > 0");
    if (segment.min_duration_min < 0.0) throw ArgumentError("--min-duration-min must be >= 0");
    if (segment.min_events < 0) throw ArgumentError("--min-events must be >= 0");
    if (k_range.first < 2 || k_range.first > k_range.last) {
        throw ArgumentError("--k-range must satisfy 2 <= A <= B");
    }
    if (g_range.first < 2 || g_range.first > g_range.last) {
        throw ArgumentError("--g-range must satisfy 2 <= A <= B");
    }
    if (eps_values.empty()) throw ArgumentError("--eps must list at least one value");
    for (double e : eps_values) {
        if (!(e > 0.0)) throw ArgumentError("--eps values must be > 0");
    }
    if (min_pts < 1) throw ArgumentError("--min-pts must be >= 1");
}

namespace {

template <typename F>
auto guarded(std::vector<std::string>& errors, const std::string& stage, F&& f)
    -> std::optional<decltype(f())> {
    try {
        return f();
    } catch (const std::exception& e) {
        errors.push_back(stage + ": " + e.what());
        return std::nullopt;
    }
}

template <typename T>
void write_file(const fs::path& path, const T& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writer(out);
}

}  // namespace

HouseholdResult analyze_household(const std::string& household_id,
                                  const std::vector<SensorEvent>& events,
                                  const RunConfig& config) {
    HouseholdResult result;
    result.household_id = household_id;
    const auto meal = filter_meal_locations(events, config.locations);
    result.episodes = segment_episodes(meal, config.segment);
    if (result.episodes.empty()) {
        result.errors.emplace_back("no episodes");
        return result;
    }

    std::optional<FeatureMatrix> features = guarded(result.errors, "features", [&] {
        return scale_features(build_features(result.episodes, config.feature_mode), config.scaling);
    });
    if (!features) return result;
    const FeatureMatrix& m = *features;

    // The three sweeps only read `m`.
    auto kmeans = std::async(std::launch::async, [&] {
        std::vector<std::string> errs;
        auto r = guarded(errs, "kmeans", [&] { return sweep_kmeans(m, config.k_range, config.seed); });
        return std::pair{r, errs};
    });
    auto gmm = std::async(std::launch::async, [&] {
        std::vector<std::string> errs;
        auto r = guarded(errs, "gmm", [&] { return sweep_gmm(m, config.g_range, config.seed); });
        return std::pair{r, errs};
    });
    auto dbscan = std::async(std::launch::async, [&] {
        std::vector<std::string> errs;
        auto r = guarded(errs, "dbscan",
                         [&] { return sweep_dbscan(m, config.eps_values, config.min_pts); });
        return std::pair{r, errs};
    });

    for (auto* fut : {&kmeans, &gmm, &dbscan}) {
        auto [report, errs] = fut->get();
        result.errors.insert(result.errors.end(), errs.begin(), errs.end());
        if (!report) continue;
        report->household_id = household_id;
        switch (report->algorithm) {
            case Algorithm::kmeans: result.kmeans = std::move(report); break;
            case Algorithm::gmm: result.gmm = std::move(report); break;
            case Algorithm::dbscan: result.dbscan = std::move(report); break;
        }
    }

    if (result.gmm) {
        const int best_g = static_cast<int>(result.gmm->best_entry().param);
        auto rows = guarded(result.errors, "categories", [&] {
            return category_summary(gmm_fit(m, best_g, config.seed), m);
        });
        if (rows) result.categories = std::move(*rows);
    }
    return result;
}

nlohmann::ordered_json summary_json(const HouseholdResult& result) {
    nlohmann::ordered_json j;
    j["household_id"] = result.household_id;
    j["n_episodes"] = result.episodes.size();
    auto& algs = j["algorithms"];
    algs = nlohmann::ordered_json::object();

    auto failure = [&](const std::string& stage) {
        for (const auto& e : result.errors) {
            if (e.starts_with(stage + ":")) return nlohmann::ordered_json{{"error", e}};
        }
        return nlohmann::ordered_json{{"error", result.errors.empty() ? "not run" : result.errors[0]}};
    };

    if (result.kmeans) {
        const auto& b = result.kmeans->best_entry();
        algs["kmeans"] = {{"best_param", b.param}, {"dbi", *b.dbi}};
    } else {
        algs["kmeans"] = failure("kmeans");
    }
    if (result.gmm) {
        const auto& b = result.gmm->best_entry();
        nlohmann::ordered_json g{{"best_param", b.param}, {"dbi", *b.dbi}};
        g["categories"] = nlohmann::ordered_json::array();
        for (const auto& c : result.categories) {
            g["categories"].push_back({{"category", c.category},
                                       {"mean_duration_min", c.mean_duration_min},
                                       {"weight", c.weight},
                                       {"count", c.count}});
        }
        algs["gmm"] = std::move(g);
    } else {
        algs["gmm"] = failure("gmm");
    }
    if (result.dbscan) {
        const auto& b = result.dbscan->best_entry();
        algs["dbscan"] = {{"best_param", b.param}, {"dbi", *b.dbi}, {"n_noise", b.n_noise}};
    } else {
        algs["dbscan"] = failure("dbscan");
    }
    return j;
}

void write_household_artifacts(const fs::path& dir, const HouseholdResult& result) {
    fs::create_directories(dir);
    write_file(dir / "episodes.csv", [&](std::ostream& o) { write_episodes_csv(o, result.episodes); });
    for (const auto* report : {&result.kmeans, &result.gmm, &result.dbscan}) {
        if (!*report) continue;
        const auto name = to_string((*report)->algorithm);
        write_file(dir / ("sweep_" + name + ".json"),
                   [&](std::ostream& o) { write_sweep_json(o, **report); });
        write_file(dir / ("dbi_" + name + ".csv"),
                   [&](std::ostream& o) { write_plot_csv(o, **report); });
    }
    if (result.gmm) {
        write_file(dir / "categories.csv",
                   [&](std::ostream& o) { write_categories_csv(o, result.categories); });
    }
    write_file(dir / "summary.json",
               [&](std::ostream& o) { o << summary_json(result).dump(2) << '\n'; });
}

PipelineOutcome run_pipeline(const RunConfig& config) {
    PipelineOutcome outcome;
    try {
        config.validate();
    } catch (const ArgumentError& e) {
        outcome.exit_code = kExitUsage;
        outcome.messages.emplace_back(e.what());
        return outcome;
    }

    std::vector<SensorEvent> events;
    try {
        if (!config.input_path.empty()) {
            std::ifstream in(config.input_path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot read input " + config.input_path.string());
            auto parsed = parse_events(in);
            if (!config.rejections_path.empty()) {
                write_file(config.rejections_path,
                           [&](std::ostream& o) { write_rejections_csv(o, parsed.rejections); });
            }
            events = std::move(parsed.events);
        } else {
            std::ifstream in(config.synth_profile_path);
            if (!in) {
                throw std::runtime_error("cannot read profile " + config.synth_profile_path.string());
            }
            events = generate_trace(parse_profile(in)).events;
        }
    } catch (const std::exception& e) {
        outcome.exit_code = kExitInput;
        outcome.messages.emplace_back(e.what());
        return outcome;
    }

    std::map<std::string, std::vector<SensorEvent>> by_household;
    for (auto& ev : events) by_household[ev.household_id].push_back(std::move(ev));
    if (by_household.empty()) {
        outcome.exit_code = kExitPipeline;
        outcome.messages.emplace_back("no episodes: input holds no events");
        return outcome;
    }

    for (const auto& [id, hh_events] : by_household) {
        HouseholdResult result;
        try {
            result = analyze_household(id, hh_events, config);
            if (!result.episodes.empty()) write_household_artifacts(config.output_dir / id, result);
        } catch (const std::exception& e) {
            result.household_id = id;
            result.errors.emplace_back(e.what());
        }
        for (const auto& err : result.errors) {
            outcome.messages.push_back("household " + id + ": " + err);
        }
        if (!result.ok()) outcome.exit_code = kExitPipeline;
        outcome.households.push_back(std::move(result));
    }
    return outcome;
}

}  // namespace mealclust
