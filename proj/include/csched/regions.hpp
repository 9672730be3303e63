#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace csched {

struct Region {
    int id = 0;
    std::string name;
};

// The 14 DNO regions of the public carbon-intensity API, id order. The
// paper's regional study covers "14 different UK regions"; which 14 is not
// stated, so this default is user-overridable via a registry CSV.
const std::vector<Region>& default_regions();

// CSV with header "region_id,region_name".
std::vector<Region> regions_from_csv(std::string_view text);
std::vector<Region> load_regions_file(const std::string& path);

// Looks up a region by id in a registry; throws Error when absent.
const Region& find_region(const std::vector<Region>& registry, int id);

}  // namespace csched
