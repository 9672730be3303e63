#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "csched/time_grid.hpp"

namespace csched {

// Policy for gaps found during ingestion. Gaps are an error by default;
// linear interpolation is opt-in and limited to short gaps so that a broken
// feed cannot silently corrupt an experiment.
enum class FillPolicy { none, linear };

// Maximum gap length (in missing intervals) the linear fill will repair.
constexpr int kMaxFillIntervals = 2;

// Half-hourly actual + one-step-forecast carbon intensity for one region.
// Immutable after construction and safe to share across concurrent runs.
struct CarbonSeries {
    int region_id = 0;  // 0 = national
    std::string region_name = "national";
    Timestamp start = 0;
    std::vector<double> actual;     // gCO2e/kWh
    std::vector<double> forecast1;  // one-step-ahead forecast; empty or same length

    static constexpr std::int64_t kStepSeconds = 1800;

    std::size_t size() const { return actual.size(); }
    bool has_forecast() const { return !forecast1.empty(); }
    Timestamp time_at(std::size_t i) const {
        return start + static_cast<Timestamp>(i) * kStepSeconds;
    }
    Timestamp end() const { return time_at(size()); }  // one past the last interval

    // 0-based index of the interval starting at t; RangeError when t is not
    // an interval start inside the series.
    std::size_t index_of(Timestamp t) const;
    bool covers(Timestamp from, Timestamp to) const {
        return from >= start && to <= end() && from <= to;
    }

    // Throws on any invariant violation: misaligned start, negative or
    // non-finite values, forecast length mismatch.
    void validate() const;

    CarbonSeries slice(Timestamp from, Timestamp to) const;
};

// Canonical CSV: header "timestamp,actual_gco2_per_kwh,forecast_gco2_per_kwh"
// (forecast column optional), ISO-8601 UTC timestamps, one row per half-hour.
CarbonSeries parse_carbon_csv(std::string_view text, FillPolicy fill = FillPolicy::none);
std::string to_csv(const CarbonSeries& s);

CarbonSeries load_carbon_csv_file(const std::string& path,
                                  FillPolicy fill = FillPolicy::none);
void save_carbon_csv_file(const CarbonSeries& s, const std::string& path);

// FNV-1a over the canonical CSV bytes; used for report provenance.
std::uint64_t data_hash(const CarbonSeries& s);

}  // namespace csched
