#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mealclust/events.hpp"

namespace mealclust {

struct MealCategory {
    std::string name;
    double start_hour_mean = 12.0;
    double start_hour_sd = 0.5;
    double duration_mean_min = 30.0;
    double duration_sd_min = 6.0;
    double daily_probability = 1.0;
    double events_per_minute = 1.0;
};

struct HouseholdProfile {
    std::string household_id = "synth";
    std::vector<MealCategory> categories;
    int days = 365;
    double noise_events_per_day = 6.0;
    std::uint64_t seed = 1;
    std::string start_date = "2023-01-01";
};

/// Breakfast, lunch, afternoon snack and dinner.
HouseholdProfile default_profile(int days = 365, std::uint64_t seed = 1);

/// Throws ProfileError naming the first invalid field.
void validate_profile(const HouseholdProfile& profile);

/// Parses the `key = value` profile format; each `[category]` line opens a
/// new category block. Throws ProfileError naming the offending field.
HouseholdProfile parse_profile(std::istream& in);
void write_profile(std::ostream& out, const HouseholdProfile& profile);

/// One episode the generator placed on purpose.
struct PlantedEpisode {
    int day = 0;
    std::string category;
    Timestamp start;
    double duration_min = 0.0;

    bool operator==(const PlantedEpisode&) const = default;
};

struct SyntheticTrace {
    std::vector<SensorEvent> events;  // time-sorted
    std::vector<PlantedEpisode> planted;
};

/// Simulates the profile's sensor log. Start hours and durations are normal
/// draws truncated at three standard deviations; durations are kept positive
/// and start hours inside the day. Spurious events fire in non-meal rooms.
SyntheticTrace generate_trace(const HouseholdProfile& profile);

void write_planted_csv(std::ostream& out, const std::vector<PlantedEpisode>& planted);
std::vector<PlantedEpisode> read_planted_csv(std::istream& in);

}  // namespace mealclust
