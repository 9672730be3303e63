#pragma once

#include <cstdint>
#include <vector>

#include "csched/carbon_series.hpp"

namespace csched {

// How the one-step error magnitude feeds the long-range synthesis: taken
// per interval from the stored one-step forecast at that interval, or as a
// single scalar sampled at the window's first step.
enum class EpsMode { per_interval, scalar };

struct ForecastModel {
    double lambda = 9.97e-3;          // MAPE growth per half-hour interval
    std::uint64_t sign_seed = 0;
    double fallback_rel_error = 0.02; // used when no stored one-step forecast exists
    EpsMode eps_mode = EpsMode::per_interval;

    void validate() const;
};

// l-step-ahead noisy forecast over a window of `values.size()` intervals
// starting one step after the datum.
struct SyntheticForecast {
    Timestamp datum = 0;             // timestamp of the window start (offset-1 interval)
    std::vector<double> values;      // gCO2e/kWh
    std::vector<double> rel_errors;  // signed, values[l] = actual[l]*(1+rel_errors[l])
};

// (forecast1 - actual) / actual. Throws ZeroActual at actual = 0; the caller
// substitutes the model's fallback.
double one_step_rel_error(double actual, double forecast1);

// |eps[l]| = |eps[1]| * (1 + lambda*(l-1)), l >= 1.
double scale_error_magnitude(double eps1_abs, long l, double lambda);

// Synthesize the noisy forecast for offsets 1..horizon. datum_pos is the
// 0-based series position of the datum boundary: offset l reads
// series.actual[datum_pos + l - 1]. Signs are independent fair Bernoulli
// draws keyed by (sign_seed, absolute datum interval, offset), so sliding
// the window re-randomizes while full runs stay reproducible.
SyntheticForecast synthesize(const CarbonSeries& series, std::size_t datum_pos,
                             std::size_t horizon, const ForecastModel& model);

}  // namespace csched
