#include "mealclust/episodes.hpp"

#include <algorithm>

#include "mealclust/errors.hpp"
#include "text_util.hpp"

namespace mealclust {

std::vector<ActivityEpisode> segment_episodes(const std::vector<SensorEvent>& events,
                                              const SegmentOptions& options) {
    if (!(options.gap_threshold_min > 0.0)) {
        throw ArgumentError("segment_episodes: gap_threshold_min must be positive");
    }
    if (options.min_duration_min < 0.0) {
        throw ArgumentError("segment_episodes: min_duration_min must be non-negative");
    }
    if (options.min_events < 0) {
        throw ArgumentError("segment_episodes: min_events must be non-negative");
    }
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].timestamp < events[i - 1].timestamp) {
            throw ArgumentError("segment_episodes: events not sorted by timestamp at index " +
                                std::to_string(i));
        }
        if (events[i].household_id != events[0].household_id) {
            throw ArgumentError("segment_episodes: events span more than one household");
        }
    }

    std::vector<ActivityEpisode> episodes;
    auto close = [&](std::size_t first, std::size_t last) {
        ActivityEpisode ep;
        ep.household_id = events[first].household_id;
        ep.start = events[first].timestamp;
        ep.end = events[last].timestamp;
        ep.duration_min = minutes_between(ep.start, ep.end);
        ep.start_hour = hour_of_day(ep.start);
        ep.event_count = static_cast<int>(last - first + 1);
        if (ep.duration_min >= options.min_duration_min && ep.event_count >= options.min_events) {
            episodes.push_back(std::move(ep));
        }
    };

    std::size_t first = 0;
    for (std::size_t i = 1; i < events.size(); ++i) {
        const double gap = minutes_between(events[i - 1].timestamp, events[i].timestamp);
        if (gap >= options.gap_threshold_min) {
            close(first, i - 1);
            first = i;
        }
    }
    if (!events.empty()) close(first, events.size() - 1);
    return episodes;
}

void write_episodes_csv(std::ostream& out, const std::vector<ActivityEpisode>& episodes) {
    out << "household_id,start,end,duration_min,start_hour,event_count\n";
    for (const auto& ep : episodes) {
        out << ep.household_id << ',' << format_timestamp(ep.start) << ','
            << format_timestamp(ep.end) << ',' << detail::format_double(ep.duration_min) << ','
            << detail::format_double(ep.start_hour) << ',' << ep.event_count << '\n';
    }
}

std::vector<ActivityEpisode> read_episodes_csv(std::istream& in) {
    std::string line;
    if (!detail::read_line(in, line) ||
        detail::trim(line) != "household_id,start,end,duration_min,start_hour,event_count") {
        throw SchemaError("household_id", "episodes CSV: unexpected header");
    }
    std::vector<ActivityEpisode> episodes;
    std::size_t line_no = 1;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        const auto bad = [&] {
            return ArgumentError("episodes CSV: malformed row at line " + std::to_string(line_no));
        };
        if (f.size() != 6) throw bad();
        ActivityEpisode ep;
        ep.household_id = detail::trim(f[0]);
        const auto start = parse_timestamp(detail::trim(f[1]));
        const auto end = parse_timestamp(detail::trim(f[2]));
        const auto duration = detail::parse_double(f[3]);
        const auto hour = detail::parse_double(f[4]);
        const auto count = detail::parse_int<int>(f[5]);
        if (!start || !end || !duration || !hour || !count) throw bad();
        ep.start = *start;
        ep.end = *end;
        ep.duration_min = *duration;
        ep.start_hour = *hour;
        ep.event_count = *count;
        episodes.push_back(std::move(ep));
    }
    return episodes;
}

}  // namespace mealclust
