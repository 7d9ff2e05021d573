#include "mealclust/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "mealclust/errors.hpp"
#include "mealclust/random.hpp"
#include "text_util.hpp"

namespace mealclust {

namespace {

struct SensorSpec {
    const char* id;
    SensorKind kind;
    const char* location;
};

constexpr std::array kMealSensors{
    SensorSpec{"kitchen_motion", SensorKind::motion, "kitchen"},
    SensorSpec{"fridge_door", SensorKind::contact, "kitchen"},
    SensorSpec{"cupboard_door", SensorKind::contact, "kitchen"},
    SensorSpec{"dining_motion", SensorKind::motion, "dining_room"},
};

constexpr std::array kNoiseSensors{
    SensorSpec{"bedroom_motion", SensorKind::motion, "bedroom"},
    SensorSpec{"living_motion", SensorKind::motion, "living_room"},
    SensorSpec{"bathroom_motion", SensorKind::motion, "bathroom"},
    SensorSpec{"entrance_door", SensorKind::contact, "entrance"},
};

Timestamp parse_start_date(const std::string& date) {
    const auto t = parse_timestamp(date + "T00:00:00");
    if (!t) throw ProfileError("start_date", "start_date: expected YYYY-MM-DD, got '" + date + "'");
    return *t;
}

// Contact sensors alternate open (1) / closed (0); motion sensors report 1.
class SensorBank {
public:
    template <std::size_t N>
    SensorEvent fire(const std::array<SensorSpec, N>& sensors, Rng& rng, Timestamp at,
                     const std::string& household) {
        const auto& s = sensors[rng.index(N)];
        SensorEvent ev{at, household, s.id, s.kind, s.location, 1};
        if (s.kind == SensorKind::contact) {
            int& state = contact_state_[s.id];
            state = 1 - state;
            ev.value = state;
        }
        return ev;
    }

private:
    std::map<std::string, int> contact_state_;
};

}  // namespace

HouseholdProfile default_profile(int days, std::uint64_t seed) {
    HouseholdProfile p;
    p.household_id = "synth";
    p.days = days;
    p.seed = seed;
    p.noise_events_per_day = 6.0;
    p.categories = {
        {"breakfast", 8.0, 0.5, 15.0, 3.0, 0.95, 1.0},
        {"lunch", 12.5, 0.5, 30.0, 6.0, 1.0, 1.0},
        {"snack", 16.5, 0.5, 8.0, 1.6, 0.6, 1.0},
        {"dinner", 19.5, 0.5, 35.0, 7.0, 1.0, 1.0},
    };
    return p;
}

void validate_profile(const HouseholdProfile& p) {
    const auto fail = [](const std::string& field, const std::string& why) {
        throw ProfileError(field, field + ": " + why);
    };
    if (p.household_id.empty() || p.household_id.find_first_of(",/\\ \t") != std::string::npos) {
        fail("household_id", "must be non-empty without commas, slashes or spaces");
    }
    if (p.days < 0) fail("days", "must be >= 0");
    if (!(p.noise_events_per_day >= 0.0) || p.noise_events_per_day > 500.0) {
        fail("noise_events_per_day", "must be in [0, 500]");
    }
    parse_start_date(p.start_date);
    if (p.categories.empty()) fail("categories", "at least one [category] block is required");
    for (const auto& c : p.categories) {
        if (c.name.empty() || c.name.find(',') != std::string::npos) {
            fail("name", "category name must be non-empty without commas");
        }
        if (!(c.start_hour_mean >= 0.0 && c.start_hour_mean < 24.0)) {
            fail("start_hour_mean", "must be in [0, 24)");
        }
        if (!(c.start_hour_sd > 0.0)) fail("start_hour_sd", "must be > 0");
        if (!(c.duration_mean_min > 0.0)) fail("duration_mean_min", "must be > 0");
        if (!(c.duration_sd_min > 0.0)) fail("duration_sd_min", "must be > 0");
        if (!(c.duration_mean_min - 3.0 * c.duration_sd_min > 0.0)) {
            fail("duration_sd_min", "duration_mean_min - 3 * duration_sd_min must be > 0");
        }
        if (!(c.daily_probability >= 0.0 && c.daily_probability <= 1.0)) {
            fail("daily_probability", "must be in [0, 1]");
        }
        if (!(c.events_per_minute > 0.0)) fail("events_per_minute", "must be > 0");
    }
}

SyntheticTrace generate_trace(const HouseholdProfile& profile) {
    validate_profile(profile);
    using std::chrono::seconds;
    Rng rng(profile.seed);
    SensorBank bank;
    SyntheticTrace trace;
    const Timestamp origin = parse_start_date(profile.start_date);
    const auto& hh = profile.household_id;

    for (int day = 0; day < profile.days; ++day) {
        const Timestamp midnight = origin + std::chrono::days{day};
        for (const auto& cat : profile.categories) {
            if (rng.uniform() >= cat.daily_probability) continue;
            double hour = 0.0;
            do {
                hour = rng.truncated_normal(cat.start_hour_mean, cat.start_hour_sd, 3.0);
            } while (hour < 0.0 || hour >= 24.0);
            const double duration =
                rng.truncated_normal(cat.duration_mean_min, cat.duration_sd_min, 3.0);

            const Timestamp start = midnight + seconds{std::llround(hour * 3600.0)};
            const auto length = std::max<long long>(1, std::llround(duration * 60.0));
            const Timestamp end = start + seconds{length};
            trace.planted.push_back(
                {day, cat.name, start, static_cast<double>(length) / 60.0});

            trace.events.push_back(bank.fire(kMealSensors, rng, start, hh));
            // Poisson arrivals strictly inside the episode.
            double offset_s = rng.exponential(cat.events_per_minute / 60.0);
            while (offset_s < static_cast<double>(length)) {
                const auto at = start + seconds{std::llround(offset_s)};
                if (at < end) trace.events.push_back(bank.fire(kMealSensors, rng, at, hh));
                offset_s += rng.exponential(cat.events_per_minute / 60.0);
            }
            trace.events.push_back(bank.fire(kMealSensors, rng, end, hh));
        }
        const auto noise = rng.poisson(profile.noise_events_per_day);
        for (std::uint64_t i = 0; i < noise; ++i) {
            const auto at = midnight + seconds{static_cast<long long>(rng.index(86400))};
            trace.events.push_back(bank.fire(kNoiseSensors, rng, at, hh));
        }
    }

    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const SensorEvent& a, const SensorEvent& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.sensor_id < b.sensor_id;
                     });
    std::stable_sort(trace.planted.begin(), trace.planted.end(),
                     [](const PlantedEpisode& a, const PlantedEpisode& b) { return a.start < b.start; });
    return trace;
}

HouseholdProfile parse_profile(std::istream& in) {
    HouseholdProfile p;
    p.categories.clear();
    std::string line;
    std::size_t line_no = 0;
    MealCategory* current = nullptr;

    auto number = [&](const std::string& key, std::string_view value) {
        const auto v = detail::parse_double(value);
        if (!v || !std::isfinite(*v)) {
            throw ProfileError(key, key + ": expected a number at line " + std::to_string(line_no));
        }
        return *v;
    };

    while (detail::read_line(in, line)) {
        ++line_no;
        auto text = detail::trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty()) continue;
        if (text == "[category]") {
            current = &p.categories.emplace_back();
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ProfileError("line " + std::to_string(line_no),
                               "expected 'key = value' at line " + std::to_string(line_no));
        }
        const std::string key{detail::trim(text.substr(0, eq))};
        const auto value = detail::trim(text.substr(eq + 1));

        if (!current) {
            if (key == "household_id") {
                p.household_id = value;
            } else if (key == "days") {
                const auto v = detail::parse_int<int>(value);
                if (!v) throw ProfileError(key, "days: expected an integer");
                p.days = *v;
            } else if (key == "noise_events_per_day") {
                p.noise_events_per_day = number(key, value);
            } else if (key == "seed") {
                const auto v = detail::parse_int<std::uint64_t>(value);
                if (!v) throw ProfileError(key, "seed: expected an unsigned integer");
                p.seed = *v;
            } else if (key == "start_date") {
                p.start_date = value;
            } else {
                throw ProfileError(key, "unknown profile key '" + key + "'");
            }
            continue;
        }
        if (key == "name") {
            current->name = value;
        } else if (key == "start_hour_mean") {
            current->start_hour_mean = number(key, value);
        } else if (key == "start_hour_sd") {
            current->start_hour_sd = number(key, value);
        } else if (key == "duration_mean_min") {
            current->duration_mean_min = number(key, value);
        } else if (key == "duration_sd_min") {
            current->duration_sd_min = number(key, value);
        } else if (key == "daily_probability") {
            current->daily_probability = number(key, value);
        } else if (key == "events_per_minute") {
            current->events_per_minute = number(key, value);
        } else {
            throw ProfileError(key, "unknown category key '" + key + "'");
        }
    }
    validate_profile(p);
    return p;
}

void write_profile(std::ostream& out, const HouseholdProfile& p) {
    using detail::format_double;
    out << "household_id = " << p.household_id << '\n'
        << "days = " << p.days << '\n'
        << "noise_events_per_day = " << format_double(p.noise_events_per_day) << '\n'
        << "seed = " << p.seed << '\n'
        << "start_date = " << p.start_date << '\n';
    for (const auto& c : p.categories) {
        out << "\n[category]\n"
            << "name = " << c.name << '\n'
            << "start_hour_mean = " << format_double(c.start_hour_mean) << '\n'
            << "start_hour_sd = " << format_double(c.start_hour_sd) << '\n'
            << "duration_mean_min = " << format_double(c.duration_mean_min) << '\n'
            << "duration_sd_min = " << format_double(c.duration_sd_min) << '\n'
            << "daily_probability = " << format_double(c.daily_probability) << '\n'
            << "events_per_minute = " << format_double(c.events_per_minute) << '\n';
    }
}

void write_planted_csv(std::ostream& out, const std::vector<PlantedEpisode>& planted) {
    out << "day,category,start,duration_min\n";
    for (const auto& e : planted) {
        out << e.day << ',' << e.category << ',' << format_timestamp(e.start) << ','
            << detail::format_double(e.duration_min) << '\n';
    }
}

std::vector<PlantedEpisode> read_planted_csv(std::istream& in) {
    std::string line;
    if (!detail::read_line(in, line) || detail::trim(line) != "day,category,start,duration_min") {
        throw SchemaError("day", "planted CSV: unexpected header");
    }
    std::vector<PlantedEpisode> out;
    while (detail::read_line(in, line)) {
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        const auto bad = [&] { return ArgumentError("planted CSV: malformed row '" + line + "'"); };
        if (f.size() != 4) throw bad();
        const auto day = detail::parse_int<int>(f[0]);
        const auto start = parse_timestamp(detail::trim(f[2]));
        const auto duration = detail::parse_double(f[3]);
        if (!day || !start || !duration) throw bad();
        out.push_back({*day, std::string(detail::trim(f[1])), *start, *duration});
    }
    return out;
}

}  // namespace mealclust
