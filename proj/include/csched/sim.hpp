#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csched/behavior.hpp"
#include "csched/carbon_series.hpp"
#include "csched/forecast.hpp"
#include "csched/scheduler.hpp"

namespace csched {

enum class Strategy { uncontrolled, mpc };
enum class ResolveMode { every_step, per_session };

// Deterministic alternative to the stochastic behavior model: plug events
// exactly at the window edges, fixed daily consumption, planned = realized.
// Used by the flexibility sweep.
struct FixedSchedule {
    int window_start_min = 20 * 60 + 30;  // minutes from midnight, grid-aligned
    int window_duration_min = 10 * 60;    // may extend past midnight
    double daily_energy_kwh = 11.28;

    void validate() const;
};

struct ScenarioConfig {
    Strategy strategy = Strategy::mpc;
    int horizon_days = 4;  // N
    BatteryParams battery;
    std::variant<BehaviorModel, FixedSchedule> behavior;
    Timestamp from = 0;
    Timestamp to = 0;  // exclusive
    double morning_floor = 50.0;
    std::uint64_t seed = 0;
    ForecastModel forecast;
    bool perfect_forecast = false;
    double initial_soc = 50.0;
    ResolveMode resolve = ResolveMode::every_step;
    // High-consumption override: planned morning floor per (0-based) sim day.
    std::map<long, double> floor_override;

    void validate() const;
};

struct StepRecord {
    Timestamp t;
    bool plugged;
    double power_kw;
    double soc;  // at the end of the interval
    double actual_intensity;
    double emitted_gco2;
};

struct SimEvent {
    Timestamp t;
    std::string kind;  // floor_relaxed | consumption_shortfall | morning_shortfall
    std::string detail;
};

struct SimTotals {
    double energy_kwh = 0.0;
    double emissions_gco2 = 0.0;
    std::optional<double> c_ev;  // absent when no energy was charged
    long shortfall_count = 0;
};

struct SimResult {
    std::vector<StepRecord> log;
    SimTotals totals;
    std::vector<SimEvent> events;
    double final_soc = 0.0;
};

// Advance the half-hour clock over [from, to), re-solving the MPC while the
// vehicle is plugged inside its planned window and applying first-interval
// powers against the actual intensity. Deterministic given the seed.
SimResult run(const ScenarioConfig& config, const CarbonSeries& series);

// Aggregates per the SimResult invariants; throws EmptyLog on an empty log.
SimTotals compute_metrics(const std::vector<StepRecord>& log, long shortfalls = 0);

// Cumulative emissions at every step, for plotting.
std::vector<double> cumulative_emissions(const std::vector<StepRecord>& log);

struct SessionBreakdown {
    Timestamp start;
    Timestamp end;
    double energy_kwh;
    double emissions_gco2;
};
// Contiguous plugged periods with their charged energy and emissions.
std::vector<SessionBreakdown> session_breakdown(const std::vector<StepRecord>& log);

// Step-log CSV (schema: timestamp,plugged,power_kw,soc_pct,actual_gco2_per_kwh,
// emitted_gco2) and totals JSON.
std::string log_to_csv(const std::vector<StepRecord>& log);
std::string totals_to_json(const SimResult& result, const ScenarioConfig& config,
                           const CarbonSeries& series);

}  // namespace csched
