#pragma once

#include <cstdint>

#include "csched/carbon_series.hpp"

namespace csched {

// Pseudo-periodic benchmark signal: a daily sinusoid (overnight trough)
// whose depth and level are modulated on a multi-day scale, plus a small
// deterministic "weather" wobble. Always >= floor_gco2. Also carries a
// synthetic one-step forecast with the given relative error so noisy
// forecast synthesis can run on it.
struct SynthParams {
    int days = 373;
    double base_gco2 = 200.0;       // mean level
    double daily_amp_gco2 = 120.0;  // sinusoid amplitude
    double day_mod_amp = 0.45;      // slow multiplicative modulation depth
    double day_mod_period = 11.0;   // days
    double wobble_gco2 = 18.0;      // short-scale wobble amplitude
    double floor_gco2 = 5.0;
    double one_step_rel = 0.02;     // |one-step forecast error|
    std::uint64_t seed = 42;
};

CarbonSeries make_synthetic_series(Timestamp start, const SynthParams& params = {});

}  // namespace csched
