#include "csched/api_client.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csched/errors.hpp"

#include <httplib.h>
#include <json.hpp>

namespace csched {

namespace {

using nlohmann::json;

std::string compact_stamp(Timestamp t) {
    const CivilDateTime c = timestamp_to_civil(t);
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02dT%02d%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute);
    return buf;
}

std::string chunk_cache_path(const FetchOptions& opt, int region_id, Timestamp a,
                             Timestamp b) {
    const std::string region =
        region_id == kNationalRegionId ? "national" : "region" + std::to_string(region_id);
    return opt.cache_dir + "/ci_" + region + "_" + compact_stamp(a) + "_" +
           compact_stamp(b) + ".json";
}

std::string http_get(const FetchOptions& opt, const std::string& path) {
    httplib::Client client(opt.base_url);
    client.set_connection_timeout(opt.timeout_seconds);
    client.set_read_timeout(opt.timeout_seconds);
    client.set_follow_location(true);
    httplib::Result res = client.Get(path);
    if (!res)
        throw HttpError("GET " + opt.base_url + path + " failed: " +
                        httplib::to_string(res.error()));
    if (res->status != 200)
        throw HttpError("GET " + opt.base_url + path + " returned status " +
                        std::to_string(res->status));
    return res->body;
}

void append_rows(const json& rows, std::vector<IntensityRow>& out) {
    for (const json& row : rows) {
        if (!row.contains("from") || !row["from"].is_string() ||
            !row.contains("intensity") || !row["intensity"].is_object())
            throw SchemaDrift("intensity row missing 'from' or 'intensity'");
        IntensityRow r{};
        r.ts = parse_iso8601(row["from"].get<std::string>());
        const json& in = row["intensity"];
        const bool has_actual = in.contains("actual") && in["actual"].is_number();
        r.has_forecast = in.contains("forecast") && in["forecast"].is_number();
        if (!has_actual && !r.has_forecast)
            throw SchemaDrift("no usable intensity value at " + format_iso8601(r.ts));
        r.forecast = r.has_forecast ? in["forecast"].get<double>() : 0.0;
        // regional payloads publish no retrospective actuals; the forecast
        // is the best available estimate there
        r.actual = has_actual ? in["actual"].get<double>() : r.forecast;
        out.push_back(r);
    }
}

}  // namespace

std::vector<IntensityRow> parse_intensity_payload(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw SchemaDrift(std::string("response is not valid JSON: ") + e.what());
    }
    if (!doc.contains("data")) throw SchemaDrift("response has no 'data' member");
    std::vector<IntensityRow> rows;
    if (doc["data"].is_array()) {
        append_rows(doc["data"], rows);  // national shape
    } else if (doc["data"].is_object() && doc["data"].contains("data") &&
               doc["data"]["data"].is_array()) {
        append_rows(doc["data"]["data"], rows);  // regional shape
    } else {
        throw SchemaDrift("unrecognized payload shape");
    }
    return rows;
}

CarbonSeries fetch_region(int region_id, Timestamp from, Timestamp to,
                          const FetchOptions& options) {
    if (from >= to) throw RangeError("fetch requires from < to");
    if (!is_half_hour_aligned(from) || !is_half_hour_aligned(to))
        throw RangeError("fetch range must be half-hour aligned");
    const std::vector<Region>& registry =
        options.registry ? *options.registry : default_regions();
    std::string region_name = "national";
    if (region_id != kNationalRegionId) region_name = find_region(registry, region_id).name;

    if (!options.cache_dir.empty())
        std::filesystem::create_directories(options.cache_dir);

    std::vector<IntensityRow> rows;
    const std::int64_t chunk_seconds =
        static_cast<std::int64_t>(options.chunk_days) * kSecondsPerDay;
    for (Timestamp a = from; a < to; a += chunk_seconds) {
        const Timestamp b = std::min<Timestamp>(a + chunk_seconds, to);
        std::string body;
        const std::string cache_file = options.cache_dir.empty()
                                           ? std::string{}
                                           : chunk_cache_path(options, region_id, a, b);
        bool from_cache = false;
        if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
            std::ifstream in(cache_file, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            body = ss.str();
            from_cache = true;
        } else {
            std::string path = "/intensity/" + format_iso8601(a) + "/" + format_iso8601(b);
            if (region_id != kNationalRegionId)
                path = "/regional/intensity/" + format_iso8601(a) + "/" +
                       format_iso8601(b) + "/regionid/" + std::to_string(region_id);
            body = http_get(options, path);
        }
        const std::vector<IntensityRow> chunk = parse_intensity_payload(body);
        if (!from_cache && !cache_file.empty()) {
            // cache only payloads that parsed; a drifted response must not
            // poison later runs
            std::ofstream out(cache_file, std::ios::binary);
            out << body;
        }
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    }

    // merge deterministically by timestamp; chunk edges may overlap
    std::stable_sort(rows.begin(), rows.end(),
                     [](const IntensityRow& x, const IntensityRow& y) { return x.ts < y.ts; });
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const IntensityRow& x, const IntensityRow& y) {
                               return x.ts == y.ts;
                           }),
               rows.end());

    // keep only [from, to) and normalize into the canonical CSV format so
    // downstream code sees exactly one representation
    bool all_forecast = !rows.empty();
    for (const IntensityRow& r : rows)
        if (!r.has_forecast) all_forecast = false;
    std::string csv = all_forecast ? "timestamp,actual_gco2_per_kwh,forecast_gco2_per_kwh\n"
                                   : "timestamp,actual_gco2_per_kwh\n";
    std::size_t kept = 0;
    for (const IntensityRow& r : rows) {
        if (r.ts < from || r.ts >= to) continue;
        ++kept;
        csv += format_iso8601(r.ts);
        csv += ',';
        csv += format_double(r.actual);
        if (all_forecast) {
            csv += ',';
            csv += format_double(r.forecast);
        }
        csv += '\n';
    }
    if (kept == 0) throw SchemaDrift("remote returned no rows inside the requested range");

    CarbonSeries s = parse_carbon_csv(csv, options.fill);
    s.region_id = region_id;
    s.region_name = region_name;
    if (s.start != from || s.end() != to)
        throw GapError("assembled series does not cover the requested range; first "
                       "missing interval at " +
                           format_iso8601(s.start == from ? s.end() : from),
                       s.start == from ? s.end() : from);
    return s;
}

}  // namespace csched
