#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mealclust/events.hpp"

namespace mealclust {

/// A burst of meal-location activity.
struct ActivityEpisode {
    std::string household_id;
    Timestamp start;
    Timestamp end;
    double duration_min = 0.0;
    double start_hour = 0.0;
    int event_count = 0;

    bool operator==(const ActivityEpisode&) const = default;
};

struct SegmentOptions {
    double gap_threshold_min = 10.0;
    double min_duration_min = 1.0;
    int min_events = 2;
};

/// Groups consecutive events whose gap is below the threshold into episodes.
///
/// An episode spans from its first to its last event. Episodes shorter than
/// `min_duration_min` or with fewer than `min_events` events are dropped.
/// Input must be sorted by timestamp and come from a single household.
std::vector<ActivityEpisode> segment_episodes(const std::vector<SensorEvent>& events,
                                              const SegmentOptions& options = {});

void write_episodes_csv(std::ostream& out, const std::vector<ActivityEpisode>& episodes);

/// Reads back the format produced by write_episodes_csv.
std::vector<ActivityEpisode> read_episodes_csv(std::istream& in);

}  // namespace mealclust
