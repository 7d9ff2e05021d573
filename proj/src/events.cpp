#include "mealclust/events.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <variant>
#include <optional>

#include "mealclust/errors.hpp"
#include "text_util.hpp"

namespace mealclust {

using detail::read_line;
using detail::split;
using detail::trim;

std::string to_string(SensorKind kind) {
    return kind == SensorKind::motion ? "motion" : "contact";
}

namespace {

constexpr std::size_t kColumnCount = std::size(kEventColumns);

// Column position of each schema field in the input header.
using ColumnMap = std::array<std::size_t, kColumnCount>;

ColumnMap read_header(std::string_view header) {
    ColumnMap positions;
    positions.fill(kColumnCount);
    const auto names = split(header);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string name{trim(names[i])};
        const auto it = std::find(std::begin(kEventColumns), std::end(kEventColumns), name);
        if (it == std::end(kEventColumns)) {
            throw SchemaError(name, "unknown column '" + name + "' in header");
        }
        const auto field = static_cast<std::size_t>(it - std::begin(kEventColumns));
        if (positions[field] != kColumnCount) {
            throw SchemaError(name, "duplicate column '" + name + "' in header");
        }
        positions[field] = i;
    }
    for (std::size_t f = 0; f < kColumnCount; ++f) {
        if (positions[f] == kColumnCount) {
            throw SchemaError(kEventColumns[f],
                              std::string("missing column '") + kEventColumns[f] + "' in header");
        }
    }
    return positions;
}

// Returns the event or the rejection reason.
std::variant<SensorEvent, std::string> parse_row(std::string_view line, const ColumnMap& cols) {
    const auto fields = split(line);
    if (fields.size() != kColumnCount) {
        return "expected " + std::to_string(kColumnCount) + " fields, got " +
               std::to_string(fields.size());
    }
    auto field = [&](std::size_t f) { return trim(fields[cols[f]]); };

    SensorEvent ev;
    const auto ts = parse_timestamp(field(0));
    if (!ts) return "unparseable timestamp '" + std::string(field(0)) + "'";
    ev.timestamp = *ts;

    ev.household_id = field(1);
    if (ev.household_id.empty()) return std::string("empty household_id");
    ev.sensor_id = field(2);
    if (ev.sensor_id.empty()) return std::string("empty sensor_id");

    const auto kind = field(3);
    if (kind == "motion") {
        ev.sensor_kind = SensorKind::motion;
    } else if (kind == "contact") {
        ev.sensor_kind = SensorKind::contact;
    } else {
        return "unknown sensor_kind '" + std::string(kind) + "'";
    }

    ev.location = field(4);
    if (ev.location.empty()) return std::string("empty location");

    const auto value = field(5);
    if (value == "0") {
        ev.value = 0;
    } else if (value == "1") {
        ev.value = 1;
    } else {
        return "non-binary value '" + std::string(value) + "'";
    }
    return ev;
}

}  // namespace

ParseResult parse_events(std::istream& input) {
    ParseResult result;
    std::string line;
    std::size_t line_no = 0;

    // Leading blank lines are tolerated before the header.
    std::optional<ColumnMap> cols;
    while (read_line(input, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        cols = read_header(line);
        break;
    }
    if (!cols) throw SchemaError(kEventColumns[0], "missing header row");

    while (read_line(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto row = parse_row(line, *cols);
        if (auto* ev = std::get_if<SensorEvent>(&row)) {
            result.events.push_back(std::move(*ev));
        } else {
            result.rejections.push_back({line_no, std::get<std::string>(row)});
        }
    }

    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const SensorEvent& a, const SensorEvent& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.sensor_id < b.sensor_id;
                     });
    return result;
}

void write_events_csv(std::ostream& out, const std::vector<SensorEvent>& events) {
    out << "timestamp,household_id,sensor_id,sensor_kind,location,value\n";
    for (const auto& ev : events) {
        out << format_timestamp(ev.timestamp) << ',' << ev.household_id << ',' << ev.sensor_id
            << ',' << to_string(ev.sensor_kind) << ',' << ev.location << ',' << ev.value << '\n';
    }
}

void write_rejections_csv(std::ostream& out, const std::vector<Rejection>& rejections) {
    out << "line,reason\n";
    for (const auto& r : rejections) {
        // Reasons may quote user data; keep the row at two fields.
        std::string reason = r.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        out << r.line << ',' << reason << '\n';
    }
}

std::set<std::string> default_meal_locations() { return {"kitchen", "dining_room"}; }

std::vector<SensorEvent> filter_meal_locations(const std::vector<SensorEvent>& events,
                                               const std::set<std::string>& locations) {
    if (locations.empty()) throw ArgumentError("filter_meal_locations: empty location set");
    std::vector<SensorEvent> kept;
    std::copy_if(events.begin(), events.end(), std::back_inserter(kept),
                 [&](const SensorEvent& ev) { return locations.contains(ev.location); });
    return kept;
}

}  // namespace mealclust
