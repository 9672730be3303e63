#include "csched/carbon_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csched/errors.hpp"

namespace csched {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

double parse_number(std::string_view field, Timestamp row_ts) {
    std::string tmp(field);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str() || *end != '\0' || !std::isfinite(v))
        throw MalformedRow("bad number '" + tmp + "' at " + format_iso8601(row_ts));
    return v;
}

struct Row {
    Timestamp ts;
    double actual;
    double forecast;  // NaN when absent
};

}  // namespace

std::size_t CarbonSeries::index_of(Timestamp t) const {
    if (t < start || t >= end() || (t - start) % kStepSeconds != 0)
        throw RangeError("timestamp " + format_iso8601(t) + " not on series grid [" +
                         format_iso8601(start) + ", " + format_iso8601(end()) + ")");
    return static_cast<std::size_t>((t - start) / kStepSeconds);
}

void CarbonSeries::validate() const {
    if (!is_half_hour_aligned(start))
        throw Error("CarbonSeries: start must be half-hour aligned");
    if (!forecast1.empty() && forecast1.size() != actual.size())
        throw Error("CarbonSeries: forecast length " + std::to_string(forecast1.size()) +
                    " != actual length " + std::to_string(actual.size()));
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!std::isfinite(actual[i]) || actual[i] < 0)
            throw NegativeIntensity("negative or non-finite intensity at " +
                                    format_iso8601(time_at(i)));
        if (!forecast1.empty() && (!std::isfinite(forecast1[i]) || forecast1[i] < 0))
            throw NegativeIntensity("negative or non-finite forecast at " +
                                    format_iso8601(time_at(i)));
    }
}

CarbonSeries CarbonSeries::slice(Timestamp from, Timestamp to) const {
    if (!covers(from, to))
        throw RangeError("slice [" + format_iso8601(from) + ", " + format_iso8601(to) +
                         ") outside series coverage");
    const std::size_t a = index_of(from);
    const std::size_t b = a + static_cast<std::size_t>((to - from) / kStepSeconds);
    CarbonSeries out;
    out.region_id = region_id;
    out.region_name = region_name;
    out.start = from;
    out.actual.assign(actual.begin() + a, actual.begin() + b);
    if (!forecast1.empty())
        out.forecast1.assign(forecast1.begin() + a, forecast1.begin() + b);
    return out;
}

CarbonSeries parse_carbon_csv(std::string_view text, FillPolicy fill) {
    std::vector<Row> rows;
    bool has_forecast_col = false;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_no;

        if (line.empty()) continue;
        if (line_no == 1) {
            auto cols = split(line, ',');
            if (cols.size() < 2 || cols[0] != "timestamp" ||
                cols[1] != "actual_gco2_per_kwh")
                throw MalformedRow("bad CSV header: '" + std::string(line) + "'");
            if (cols.size() >= 3 && cols[2] == "forecast_gco2_per_kwh")
                has_forecast_col = true;
            else if (cols.size() >= 3)
                throw MalformedRow("unexpected CSV column: '" + std::string(cols[2]) + "'");
            continue;
        }

        auto fields = split(line, ',');
        if (fields.size() < 2 || (has_forecast_col && fields.size() > 3) ||
            (!has_forecast_col && fields.size() > 2))
            throw MalformedRow("wrong field count on line " + std::to_string(line_no));
        Row r{};
        r.ts = parse_iso8601(fields[0]);
        r.actual = parse_number(fields[1], r.ts);
        r.forecast = std::nan("");
        if (has_forecast_col && fields.size() == 3 && !fields[2].empty())
            r.forecast = parse_number(fields[2], r.ts);
        if (!is_half_hour_aligned(r.ts))
            throw MalformedRow("timestamp not on half-hour grid: " + format_iso8601(r.ts));
        if (r.actual < 0)
            throw NegativeIntensity("negative intensity " + format_double(r.actual) +
                                    " at " + format_iso8601(r.ts));
        if (has_forecast_col && !std::isnan(r.forecast) && r.forecast < 0)
            throw NegativeIntensity("negative forecast at " + format_iso8601(r.ts));
        rows.push_back(r);
    }
    if (rows.empty()) throw MalformedRow("empty CSV");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.ts < b.ts; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].ts == rows[i - 1].ts)
            throw MalformedRow("duplicate timestamp " + format_iso8601(rows[i].ts));

    // Gap scan, with optional linear fill of short gaps.
    std::vector<Row> filled;
    filled.reserve(rows.size());
    filled.push_back(rows[0]);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const Timestamp expect = filled.back().ts + CarbonSeries::kStepSeconds;
        if (rows[i].ts != expect) {
            const std::int64_t missing = (rows[i].ts - expect) / CarbonSeries::kStepSeconds;
            if (fill == FillPolicy::none || missing > kMaxFillIntervals)
                throw GapError("missing interval at " + format_iso8601(expect), expect);
            const Row& lo = filled.back();
            const Row& hi = rows[i];
            for (std::int64_t k = 1; k <= missing; ++k) {
                const double f = static_cast<double>(k) / static_cast<double>(missing + 1);
                Row mid{};
                mid.ts = lo.ts + k * CarbonSeries::kStepSeconds;
                mid.actual = lo.actual + f * (hi.actual - lo.actual);
                mid.forecast = (std::isnan(lo.forecast) || std::isnan(hi.forecast))
                                   ? std::nan("")
                                   : lo.forecast + f * (hi.forecast - lo.forecast);
                filled.push_back(mid);
            }
        }
        filled.push_back(rows[i]);
    }

    CarbonSeries s;
    s.start = filled.front().ts;
    s.actual.reserve(filled.size());
    bool any_forecast = false, all_forecast = true;
    for (const Row& r : filled) {
        s.actual.push_back(r.actual);
        if (std::isnan(r.forecast))
            all_forecast = false;
        else
            any_forecast = true;
    }
    if (any_forecast && !all_forecast)
        throw MalformedRow("forecast column must be fully populated or fully empty");
    if (any_forecast) {
        s.forecast1.reserve(filled.size());
        for (const Row& r : filled) s.forecast1.push_back(r.forecast);
    }
    s.validate();
    return s;
}

std::string to_csv(const CarbonSeries& s) {
    std::string out = s.has_forecast()
                          ? "timestamp,actual_gco2_per_kwh,forecast_gco2_per_kwh\n"
                          : "timestamp,actual_gco2_per_kwh\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += format_iso8601(s.time_at(i));
        out += ',';
        out += format_double(s.actual[i]);
        if (s.has_forecast()) {
            out += ',';
            out += format_double(s.forecast1[i]);
        }
        out += '\n';
    }
    return out;
}

CarbonSeries load_carbon_csv_file(const std::string& path, FillPolicy fill) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_carbon_csv(ss.str(), fill);
}

void save_carbon_csv_file(const CarbonSeries& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << to_csv(s);
}

std::uint64_t data_hash(const CarbonSeries& s) {
    const std::string csv = to_csv(s);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : csv) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace csched
