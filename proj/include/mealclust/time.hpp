#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace mealclust {

/// Naive local date-time with seconds precision. No timezone is attached.
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS`. Returns nullopt on any deviation from that
/// exact layout, an invalid calendar date, or a year outside [2000, 2100].
std::optional<Timestamp> parse_timestamp(std::string_view text);

std::string format_timestamp(Timestamp t);

/// Hour of day as a real, e.g. 13.5 for 13:30:00.
double hour_of_day(Timestamp t);

/// Difference in minutes.
inline double minutes_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / 60.0;
}

}  // namespace mealclust
