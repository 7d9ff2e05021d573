#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mealclust/episodes.hpp"
#include "mealclust/features.hpp"
#include "mealclust/gmm.hpp"
#include "mealclust/validation.hpp"

namespace mealclust {

struct RunConfig {
    std::filesystem::path input_path;          // sensor CSV, or
    std::filesystem::path synth_profile_path;  // a profile to simulate
    std::set<std::string> locations = default_meal_locations();
    SegmentOptions segment;
    FeatureMode feature_mode = FeatureMode::duration_and_start_hour;
    Scaling scaling = Scaling::none;
    IntRange k_range{2, 10};
    IntRange g_range{2, 10};
    std::vector<double> eps_values = default_eps_values();
    int min_pts = 5;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    std::filesystem::path rejections_path;  // optional `line,reason` report

    /// Throws ArgumentError on the first violated precondition.
    void validate() const;
};

/// Everything computed for one household.
struct HouseholdResult {
    std::string household_id;
    std::vector<ActivityEpisode> episodes;
    std::optional<SweepReport> kmeans;
    std::optional<SweepReport> gmm;
    std::optional<SweepReport> dbscan;
    std::vector<CategoryRow> categories;
    std::vector<std::string> errors;  // one line per failed stage

    bool ok() const { return errors.empty(); }
};

/// Runs segmentation, featurization and the three sweeps for one household.
/// Stage failures are recorded in `errors`; later stages still run.
HouseholdResult analyze_household(const std::string& household_id,
                                  const std::vector<SensorEvent>& events,
                                  const RunConfig& config);

/// Machine-readable digest of a household result.
nlohmann::ordered_json summary_json(const HouseholdResult& result);

/// Writes episodes.csv, sweep_<alg>.json, dbi_<alg>.csv, categories.csv and
/// summary.json into `dir`.
void write_household_artifacts(const std::filesystem::path& dir, const HouseholdResult& result);

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitPipeline = 3 };

struct PipelineOutcome {
    int exit_code = kExitOk;
    std::vector<std::string> messages;  // single-line reasons for failures
    std::vector<HouseholdResult> households;
};

/// Full flow: ingest, filter, segment, featurize, sweep, report.
PipelineOutcome run_pipeline(const RunConfig& config);

}  // namespace mealclust
