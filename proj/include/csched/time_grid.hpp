#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace csched {

// Seconds since the Unix epoch, UTC. All timestamps in the library are UTC;
// local-time display is a presentation concern only.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerMinute = 60;
constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDateTime {
    int year;
    int month;   // 1..12
    int day;     // 1..31
    int hour;    // 0..23
    int minute;  // 0..59
    int second;  // 0..59
};

Timestamp civil_to_timestamp(const CivilDateTime& c);
CivilDateTime timestamp_to_civil(Timestamp t);

// Accepts "YYYY-MM-DDTHH:MMZ" and "YYYY-MM-DDTHH:MM:SSZ" (also "+00:00").
// Throws MalformedRow on anything else.
Timestamp parse_iso8601(std::string_view s);

// "YYYY-MM-DD" -> midnight UTC.
Timestamp parse_date(std::string_view s);

// Canonical form, minute resolution: "YYYY-MM-DDTHH:MMZ".
std::string format_iso8601(Timestamp t);

// With seconds, for logs: "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_seconds(Timestamp t);

struct SessionIndex {
    long day;   // s, 1-based
    long slot;  // k, 1-based within day
    bool operator==(const SessionIndex&) const = default;
};

// Double-indexing of a 1-based linear interval index: l = c*(s-1) + k.
SessionIndex linear_to_session(long l, int intervals_per_day);
long session_to_linear(SessionIndex sk, int intervals_per_day);
long session_to_linear(long day, long slot, int intervals_per_day);

// Half-hourly planning grid anchored at a UTC datum.
struct TimeGrid {
    double delta_t_hours = 0.5;
    int intervals_per_day = 48;
    Timestamp datum = 0;

    TimeGrid() = default;
    TimeGrid(double dt_hours, int c, Timestamp datum_ts);

    std::int64_t step_seconds() const {
        return static_cast<std::int64_t>(delta_t_hours * 3600.0 + 0.5);
    }
    // Start of the l-th interval, l >= 1; interval l covers
    // [interval_start(l), interval_start(l+1)).
    Timestamp interval_start(long l) const { return datum + (l - 1) * step_seconds(); }
    // 1-based index of the interval containing t (t >= datum).
    long index_of(Timestamp t) const { return (t - datum) / step_seconds() + 1; }

    void validate() const;  // throws Error on a bad grid
};

// True when t falls on a half-hour boundary (minutes 0 or 30, seconds 0).
bool is_half_hour_aligned(Timestamp t);

// Shortest decimal form of x that parses back to exactly x.
std::string format_double(double x);

}  // namespace csched
