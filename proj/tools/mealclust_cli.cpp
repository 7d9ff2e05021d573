// Command-line driver: `mealclust run` for the clustering pipeline and
// `mealclust generate` for synthetic sensor logs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mealclust/errors.hpp"
#include "mealclust/pipeline.hpp"
#include "mealclust/synth.hpp"

namespace fs = std::filesystem;
using namespace mealclust;

namespace {

std::set<std::string> parse_locations(const std::string& text) {
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.insert(item);
    }
    return out;
}

fs::path default_truth_path(const fs::path& trace) {
    fs::path p = trace;
    p.replace_filename(trace.stem().string() + "_truth.csv");
    return p;
}

int generate_command(const std::string& profile_path, const fs::path& out, fs::path truth) {
    HouseholdProfile profile;
    try {
        if (profile_path.empty()) {
            profile = default_profile();
        } else {
            std::ifstream in(profile_path);
            if (!in) {
                std::cerr << "error: cannot read profile " << profile_path << '\n';
                return kExitInput;
            }
            profile = parse_profile(in);
        }
    } catch (const ProfileError& e) {
        std::cerr << "error: invalid profile field '" << e.field() << "': " << e.what() << '\n';
        return kExitInput;
    }

    const auto trace = generate_trace(profile);
    if (truth.empty()) truth = default_truth_path(out);
    std::ofstream trace_out(out, std::ios::binary);
    std::ofstream truth_out(truth, std::ios::binary);
    if (!trace_out || !truth_out) {
        std::cerr << "error: cannot write " << out << " or " << truth << '\n';
        return kExitPipeline;
    }
    write_events_csv(trace_out, trace.events);
    write_planted_csv(truth_out, trace.planted);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Meal-taking activity clustering from binary home-sensor logs"};
    app.require_subcommand(1);

    RunConfig config;
    std::string input, profile, locations = "kitchen,dining_room", features = "duration+hour",
                                    scale = "none", k_range = "2..10", g_range = "2..10", eps,
                                    out, rejections;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Segment episodes and sweep K-Means, GMM and DBSCAN");
    run->add_option("--input", input, "Sensor log CSV");
    run->add_option("--synth-profile", profile, "Simulate this household profile instead");
    run->add_option("--locations", locations, "Comma-separated meal locations")
        ->capture_default_str();
    run->add_option("--gap-min", config.segment.gap_threshold_min, "Episode split gap (minutes)")
        ->capture_default_str();
    run->add_option("--min-duration-min", config.segment.min_duration_min,
                    "Shortest kept episode (minutes)")
        ->capture_default_str();
    run->add_option("--min-events", config.segment.min_events, "Fewest events per episode")
        ->capture_default_str();
    run->add_option("--features", features, "duration | duration+hour")->capture_default_str();
    run->add_option("--scale", scale, "none | zscore")->capture_default_str();
    run->add_option("--k-range", k_range, "K-Means cluster counts A..B")->capture_default_str();
    run->add_option("--g-range", g_range, "GMM component counts A..B")->capture_default_str();
    run->add_option("--eps", eps, "DBSCAN eps list (comma-separated or A..B, default 1..10)");
    run->add_option("--min-pts", config.min_pts, "DBSCAN min points")->capture_default_str();
    run->add_option("--seed", seed, "Seed (falls back to $MEALCLUST_SEED, then 0)");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--rejections", rejections, "Write rejected input rows here as line,reason");

    std::string gen_profile, gen_out, gen_truth;
    auto* gen = app.add_subcommand("generate", "Write a synthetic sensor log and its planted truth");
    gen->add_option("--profile", gen_profile, "Household profile (default: built-in 4 meals)");
    gen->add_option("--out", gen_out, "Trace CSV path")->required();
    gen->add_option("--truth", gen_truth, "Planted episodes CSV (default: <out>_truth.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (*gen) return generate_command(gen_profile, gen_out, gen_truth);

    try {
        config.input_path = input;
        config.synth_profile_path = profile;
        config.locations = parse_locations(locations);
        config.feature_mode = parse_feature_mode(features);
        config.scaling = parse_scaling(scale);
        config.k_range = parse_int_range(k_range);
        config.g_range = parse_int_range(g_range);
        if (!eps.empty()) config.eps_values = parse_eps_list(eps);
        config.output_dir = out;
        config.rejections_path = rejections;
        if (seed) {
            config.seed = *seed;
        } else if (const char* env = std::getenv("MEALCLUST_SEED")) {
            config.seed = std::stoull(env);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const auto outcome = run_pipeline(config);
    for (const auto& msg : outcome.messages) std::cerr << "error: " << msg << '\n';
    for (const auto& hh : outcome.households) {
        if (!hh.ok()) continue;
        std::cout << hh.household_id << ": " << hh.episodes.size() << " episodes -> "
                  << (config.output_dir / hh.household_id).string() << '\n';
    }
    return outcome.exit_code;
}
