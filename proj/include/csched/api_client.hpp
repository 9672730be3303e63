#pragma once

#include <string>
#include <vector>

#include "csched/carbon_series.hpp"
#include "csched/regions.hpp"

namespace csched {

constexpr int kNationalRegionId = 0;

struct FetchOptions {
    std::string base_url = "https://api.carbonintensity.org.uk";
    std::string cache_dir;  // empty disables the response cache
    int chunk_days = 13;    // the public API caps ranges at 14 days
    int timeout_seconds = 20;
    FillPolicy fill = FillPolicy::none;
    const std::vector<Region>* registry = nullptr;  // default registry when null
};

// Fetch [from, to) for a region (kNationalRegionId for the national signal),
// chunking the range to respect the API's pagination limit, normalizing the
// JSON payloads into the canonical series format and validating the result
// gap-free. Raw response bodies are cached per chunk under cache_dir.
CarbonSeries fetch_region(int region_id, Timestamp from, Timestamp to,
                          const FetchOptions& options = {});

// Normalize one API response body (national or regional payload shape) into
// (timestamp, actual, forecast) rows. Exposed for the client tests.
struct IntensityRow {
    Timestamp ts;
    double actual;
    double forecast;
    bool has_forecast;
};
std::vector<IntensityRow> parse_intensity_payload(const std::string& body);

}  // namespace csched
