#pragma once

#include <map>
#include <string>
#include <vector>

#include "csched/sim.hpp"

namespace csched {

constexpr const char* kToolVersion = "carbon-sched 1.0.0";

// Shared base for the three experiment kinds: the scenario template (its
// strategy/horizon/behavior fields are overridden per grid cell) and the
// replication seeds. Each MPC row is compared against an uncontrolled run
// with the same seed, so behavior realizations match pairwise.
struct ExperimentBase {
    ScenarioConfig scenario;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

// --- strategy table (year-long comparison) ---

struct StrategyTableRow {
    std::string strategy;  // "uncontrolled" or "mpc1", "mpc2", ...
    double c_ev = 0.0;     // mean over seeds, gCO2e/kWh
    double c_ev_min = 0.0;
    double c_ev_max = 0.0;
    double pct_reduction = 0.0;  // vs the uncontrolled row
    double energy_kwh = 0.0;     // mean over seeds
    double emissions_gco2 = 0.0;
    long shortfalls = 0;  // summed over seeds
};

std::vector<StrategyTableRow> strategy_table(const ExperimentBase& base,
                                             const CarbonSeries& series,
                                             const std::vector<int>& horizons = {1, 2, 4, 7});

std::string strategy_table_csv(const std::vector<StrategyTableRow>& rows);
std::string strategy_table_json(const std::vector<StrategyTableRow>& rows,
                                const ExperimentBase& base, const CarbonSeries& series);

// --- flexibility sweep (plug-in windows x demands, MPC horizon fixed) ---

struct SweepAxes {
    std::vector<int> window_hours = {20, 18, 16, 14, 12, 10, 8, 6, 4};
    std::vector<double> demands_kwh = {5, 10, 20, 30};
    // window center anchors, minutes from midnight
    int overnight_center_min = 1 * 60;
    int daytime_center_min = 13 * 60;
    int mpc_horizon = 4;
};

struct SweepRow {
    std::string placement;  // "overnight" | "daytime"
    int window_hours = 0;
    double demand_kwh = 0.0;
    bool feasible = true;  // false marks an absent cell (empty window)
    double c_ev = 0.0;
    double energy_kwh = 0.0;
    double emissions_gco2 = 0.0;
    long shortfalls = 0;
};

std::vector<SweepRow> flexibility_sweep(const ExperimentBase& base,
                                        const CarbonSeries& series,
                                        const SweepAxes& axes = {});

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows, const ExperimentBase& base,
                       const CarbonSeries& series);

// --- regional comparison ---

struct RegionalRow {
    int region_id = 0;
    std::string region_name;
    std::string strategy;
    bool ok = true;        // false isolates a failed region; error holds why
    std::string error;
    double c_ev = 0.0;
    double abs_reduction = 0.0;  // vs uncontrolled in the same region
    double pct_reduction = 0.0;
    double energy_kwh = 0.0;
    double emissions_gco2 = 0.0;
    long shortfalls = 0;
};

std::vector<RegionalRow> regional(const ExperimentBase& base,
                                  const std::map<int, CarbonSeries>& regional_series,
                                  const std::vector<int>& horizons = {1, 2, 4});

std::string regional_csv(const std::vector<RegionalRow>& rows);
std::string regional_json(const std::vector<RegionalRow>& rows,
                          const ExperimentBase& base);

}  // namespace csched
