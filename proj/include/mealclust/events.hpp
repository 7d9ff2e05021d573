#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "mealclust/time.hpp"

namespace mealclust {

enum class SensorKind { motion, contact };

std::string to_string(SensorKind kind);

/// One binary activation reported by a home sensor.
struct SensorEvent {
    Timestamp timestamp;
    std::string household_id;
    std::string sensor_id;
    SensorKind sensor_kind = SensorKind::motion;
    std::string location;
    int value = 1;  // 0 or 1

    bool operator==(const SensorEvent&) const = default;
};

/// A data row that could not be turned into a SensorEvent.
struct Rejection {
    std::size_t line = 0;  // 1-based line in the input; the header is line 1
    std::string reason;

    bool operator==(const Rejection&) const = default;
};

struct ParseResult {
    std::vector<SensorEvent> events;
    std::vector<Rejection> rejections;
};

/// Column order written by write_events_csv. parse_events accepts any order.
inline constexpr const char* kEventColumns[] = {
    "timestamp", "household_id", "sensor_id", "sensor_kind", "location", "value"};

/// Reads the sensor log CSV.
///
/// Events come back sorted by (timestamp, sensor_id), keeping input order for
/// full ties. Bad rows land in `rejections` with their line number; blank lines
/// are not data rows. Throws SchemaError for a missing, unknown or duplicated
/// header column.
ParseResult parse_events(std::istream& input);

void write_events_csv(std::ostream& out, const std::vector<SensorEvent>& events);

void write_rejections_csv(std::ostream& out, const std::vector<Rejection>& rejections);

/// Locations treated as meal-related when none are given.
std::set<std::string> default_meal_locations();

/// Keeps the events whose location is in `locations`, preserving order.
/// Throws ArgumentError when `locations` is empty.
std::vector<SensorEvent> filter_meal_locations(const std::vector<SensorEvent>& events,
                                               const std::set<std::string>& locations);

}  // namespace mealclust
