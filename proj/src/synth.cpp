#include "csched/synth.hpp"

#include <cmath>

#include "csched/det_rng.hpp"

namespace csched {

CarbonSeries make_synthetic_series(Timestamp start, const SynthParams& p) {
    constexpr double kTwoPi = 6.283185307179586;
    const int c = 48;
    CarbonSeries s;
    s.region_id = 0;
    s.region_name = "synthetic";
    s.start = start;
    const std::size_t n = static_cast<std::size_t>(p.days) * c;
    s.actual.reserve(n);
    s.forecast1.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double day_frac = static_cast<double>(i % c) / c;
        const double day = static_cast<double>(i) / c;
        // trough in the small hours (~03:00), peak in the evening
        const double daily = -std::cos(kTwoPi * (day_frac - 0.125));
        const double mod = 1.0 + p.day_mod_amp * std::sin(kTwoPi * day / p.day_mod_period);
        const double wobble =
            p.wobble_gco2 *
            std::sin(kTwoPi * day / 2.3 + 1.7 * std::sin(kTwoPi * day / 5.1));
        double v = p.base_gco2 + p.daily_amp_gco2 * mod * daily + wobble;
        if (v < p.floor_gco2) v = p.floor_gco2;
        s.actual.push_back(v);
        const int sign = rng::sign_pm1(rng::keyed(p.seed, 0x5f0cA57ULL, i));
        double f = v * (1.0 + sign * p.one_step_rel);
        if (f < 0) f = 0;
        s.forecast1.push_back(f);
    }
    s.validate();
    return s;
}

}  // namespace csched
