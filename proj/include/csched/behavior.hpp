#pragma once

#include <cstdint>

#include "csched/time_grid.hpp"

namespace csched {

// Stochastic daily plug-in/plug-out and energy-consumption model. Plug-in
// happens in the evening of a day, plug-out the following morning.
struct BehaviorModel {
    double plugin_mean_min = 18.0 * 60;   // minutes from midnight
    double plugin_sd_min = 60.0;
    double plugout_mean_min = 9.0 * 60;   // next morning
    double plugout_sd_min = 60.0;
    double energy_mean_kwh = 5.8;
    double energy_sd_kwh = 2.67;
    double planning_quantile = 0.98;
    std::uint64_t seed = 0;

    void validate() const;
};

// Conservative planned charging window, minutes from midnight. The start is
// an evening time on day d, the end a morning time on day d+1.
struct PlannedWindow {
    double start_min = 0;  // raw quantile values
    double end_min = 0;
    int start_min_grid = 0;  // start rounded up, end rounded down to the grid
    int end_min_grid = 0;

    double duration_grid_min() const {
        return (24.0 * 60 - start_min_grid) + end_min_grid;
    }
};

// Quantile-based window: start = plugin_mean + z_q*sd (late plug-in),
// end = plugout_mean - z_q*sd (early plug-out). Throws EmptyWindow when
// quantization leaves no charging time.
PlannedWindow conservative_window(const BehaviorModel& model,
                                  int grid_step_min = 30);

// planning-quantile of the daily energy draw, kWh.
double conservative_energy(const BehaviorModel& model);

struct SessionRealization {
    Timestamp plug_in = 0;   // evening of the day
    Timestamp plug_out = 0;  // following morning
    double day_energy_kwh = 0;
};

// Realized events for one day, keyed deterministically by (seed, day_index).
// day_midnight is the UTC midnight the day starts at. Energy draws are
// resampled until non-negative; plug-out is resampled if it would not
// follow the plug-in.
SessionRealization sample_day(const BehaviorModel& model, long day_index,
                              Timestamp day_midnight);

}  // namespace csched
