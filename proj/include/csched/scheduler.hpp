#pragma once

#include <string>
#include <vector>

#include "csched/errors.hpp"

namespace csched {

struct BatteryParams {
    double capacity_kwh = 50.0;  // B
    double p_max_kw = 10.0;      // max charging power
    double soc_min = 20.0;       // percent
    double soc_max = 80.0;       // percent

    void validate() const;
    // Energy (kWh) <-> SOC points (percent of capacity).
    double kwh_to_soc(double kwh) const { return kwh * 100.0 / capacity_kwh; }
    double soc_to_kwh(double soc) const { return soc * capacity_kwh / 100.0; }
};

// One planned charging opportunity inside the horizon. Interval indices are
// global 1-based positions on the horizon grid (l = c*(s-1)+k convention),
// so windows that span midnight need no special casing.
struct ChargingSession {
    long k_begin = 0;
    long k_end = 0;
    std::vector<double> intensities;  // gCO2e/kWh, one per interval, k_begin..k_end

    long length() const { return k_end - k_begin + 1; }
};

// One MPC optimization instance over N sessions.
struct HorizonProblem {
    std::vector<ChargingSession> sessions;
    std::vector<double> demands_kwh;    // E_s for s = 1..N-1, deducted between sessions
    double soc0 = 50.0;                 // percent, at horizon start
    std::vector<double> morning_floors; // percent, one per session
    BatteryParams battery;
    double delta_t_hours = 0.5;

    std::size_t session_count() const { return sessions.size(); }
    long total_intervals() const;
    void validate() const;
};

struct PowerSchedule {
    // powers_kw[s][j]: charging power in the j-th interval of session s
    std::vector<std::vector<double>> powers_kw;
    // predicted_soc[s]: SOC trajectory over session s boundaries,
    // length sessions[s].length()+1; front() is the session-entry SOC
    // (post-deduction), back() the session-end SOC
    std::vector<std::vector<double>> predicted_soc;
    double predicted_cost_gco2 = 0.0;  // J0
    bool meets_floors = true;          // uncontrolled_schedule may report false

    double total_energy_kwh(double delta_t_hours) const;
};

// Globally optimal schedule for the linear net-carbon objective under the
// power box, SOC band, and morning-floor constraints. Ties between
// equal-intensity intervals break toward the earlier interval.
// Throws Infeasible naming the first session whose end requirement cannot
// be met at max power; the caller owns any relaxation policy.
PowerSchedule solve(const HorizonProblem& problem);

// Exhaustive verification oracle over the power grid
// {0, p_max/(levels-1), ..., p_max} per interval. Test use only.
PowerSchedule brute_force_oracle(const HorizonProblem& problem, int levels);

// Charge at max power from each session start until the SOC cap, final
// interval at partial power; ignores intensities. Morning-floor or band
// violations under this maximal policy are flagged, never thrown.
PowerSchedule uncontrolled_schedule(const HorizonProblem& problem);

// Clamp morning floors (and, when a day's demand exceeds what is storable,
// planned demands) to what max-power charging can achieve, so that solve()
// is feasible on the result. Returns the 1-based sessions that were relaxed.
std::vector<int> relax_to_achievable(HorizonProblem& problem);

// Independent re-simulation of Eqs. of motion for a schedule; returns the
// largest constraint violation in SOC points (0 when fully feasible).
double max_constraint_violation(const HorizonProblem& problem, const PowerSchedule& s);

}  // namespace csched
