#include "csched/regions.hpp"

#include <fstream>
#include <sstream>

#include "csched/errors.hpp"

namespace csched {

const std::vector<Region>& default_regions() {
    static const std::vector<Region> regions = {
        {1, "North Scotland"},
        {2, "South Scotland"},
        {3, "North West England"},
        {4, "North East England"},
        {5, "Yorkshire"},
        {6, "North Wales & Merseyside"},
        {7, "South Wales"},
        {8, "West Midlands"},
        {9, "East Midlands"},
        {10, "East England"},
        {11, "South West England"},
        {12, "South England"},
        {13, "London"},
        {14, "South East England"},
    };
    return regions;
}

std::vector<Region> regions_from_csv(std::string_view text) {
    std::vector<Region> out;
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
            if (line != "region_id,region_name")
                throw MalformedRow("bad region registry header");
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw MalformedRow("bad region registry row: '" + std::string(line) + "'");
        Region r;
        try {
            r.id = std::stoi(std::string(line.substr(0, comma)));
        } catch (const std::exception&) {
            throw MalformedRow("bad region id on line " + std::to_string(line_no));
        }
        r.name = std::string(line.substr(comma + 1));
        out.push_back(std::move(r));
    }
    if (out.empty()) throw MalformedRow("empty region registry");
    return out;
}

std::vector<Region> load_regions_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open region registry '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return regions_from_csv(ss.str());
}

const Region& find_region(const std::vector<Region>& registry, int id) {
    for (const Region& r : registry)
        if (r.id == id) return r;
    throw Error("region id " + std::to_string(id) + " not in registry");
}

}  // namespace csched
