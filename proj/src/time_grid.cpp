#include "csched/time_grid.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "csched/errors.hpp"

namespace csched {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

Timestamp civil_to_timestamp(const CivilDateTime& c) {
    return days_from_civil(c.year, c.month, c.day) * kSecondsPerDay +
           c.hour * kSecondsPerHour + c.minute * kSecondsPerMinute + c.second;
}

CivilDateTime timestamp_to_civil(Timestamp t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t rem = t % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    CivilDateTime c{};
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / kSecondsPerHour);
    c.minute = static_cast<int>((rem % kSecondsPerHour) / kSecondsPerMinute);
    c.second = static_cast<int>(rem % kSecondsPerMinute);
    return c;
}

Timestamp parse_iso8601(std::string_view s) {
    // YYYY-MM-DDTHH:MM[:SS](Z|+00:00)
    CivilDateTime c{};
    if (!parse_int(s, 0, 4, c.year) || s.size() < 16 || s[4] != '-' || s[7] != '-' ||
        (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
        !parse_int(s, 5, 2, c.month) || !parse_int(s, 8, 2, c.day) ||
        !parse_int(s, 11, 2, c.hour) || !parse_int(s, 14, 2, c.minute)) {
        throw MalformedRow("bad timestamp: '" + std::string(s) + "'");
    }
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!parse_int(s, pos + 1, 2, c.second))
            throw MalformedRow("bad timestamp seconds: '" + std::string(s) + "'");
        pos += 3;
    }
    std::string_view tz = s.substr(pos);
    if (tz != "Z" && tz != "+00:00" && tz != "+0000")
        throw MalformedRow("timestamp must be UTC ('Z'): '" + std::string(s) + "'");
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 ||
        c.minute > 59 || c.second > 59)
        throw MalformedRow("timestamp field out of range: '" + std::string(s) + "'");
    return civil_to_timestamp(c);
}

Timestamp parse_date(std::string_view s) {
    CivilDateTime c{};
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !parse_int(s, 0, 4, c.year) ||
        !parse_int(s, 5, 2, c.month) || !parse_int(s, 8, 2, c.day))
        throw MalformedRow("bad date: '" + std::string(s) + "' (want YYYY-MM-DD)");
    return civil_to_timestamp(c);
}

std::string format_iso8601(Timestamp t) {
    const CivilDateTime c = timestamp_to_civil(t);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute);
    return buf;
}

std::string format_iso8601_seconds(Timestamp t) {
    const CivilDateTime c = timestamp_to_civil(t);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month,
                  c.day, c.hour, c.minute, c.second);
    return buf;
}

SessionIndex linear_to_session(long l, int intervals_per_day) {
    if (l < 1) throw RangeError("linear interval index must be >= 1, got " + std::to_string(l));
    const long c = intervals_per_day;
    return SessionIndex{(l - 1) / c + 1, (l - 1) % c + 1};
}

long session_to_linear(SessionIndex sk, int intervals_per_day) {
    return session_to_linear(sk.day, sk.slot, intervals_per_day);
}

long session_to_linear(long day, long slot, int intervals_per_day) {
    const long c = intervals_per_day;
    if (day < 1 || slot < 1 || slot > c)
        throw RangeError("session index out of range: s=" + std::to_string(day) +
                         " k=" + std::to_string(slot));
    return c * (day - 1) + slot;
}

TimeGrid::TimeGrid(double dt_hours, int c, Timestamp datum_ts)
    : delta_t_hours(dt_hours), intervals_per_day(c), datum(datum_ts) {
    validate();
}

void TimeGrid::validate() const {
    if (delta_t_hours <= 0 || intervals_per_day <= 0)
        throw Error("TimeGrid: delta_t and intervals_per_day must be positive");
    if (std::fabs(intervals_per_day * delta_t_hours - 24.0) > 1e-9)
        throw Error("TimeGrid: c * delta_t must equal 24 hours");
    if (!is_half_hour_aligned(datum))
        throw Error("TimeGrid: datum must fall on a half-hour boundary, got " +
                    format_iso8601_seconds(datum));
}

bool is_half_hour_aligned(Timestamp t) {
    std::int64_t rem = t % 1800;
    if (rem < 0) rem += 1800;
    return rem == 0;
}

std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace csched
