#include "csched/forecast.hpp"

#include <cmath>

#include "csched/det_rng.hpp"
#include "csched/errors.hpp"

namespace csched {

namespace {
constexpr std::uint64_t kSignSalt = 0x5e9f00d5c4a1b2e3ULL;
}

void ForecastModel::validate() const {
    if (lambda < 0) throw Error("forecast lambda must be >= 0");
    if (fallback_rel_error < 0) throw Error("fallback relative error must be >= 0");
}

double one_step_rel_error(double actual, double forecast1) {
    if (actual == 0.0) throw ZeroActual("one-step relative error undefined at actual=0");
    return (forecast1 - actual) / actual;
}

double scale_error_magnitude(double eps1_abs, long l, double lambda) {
    return eps1_abs * (1.0 + lambda * static_cast<double>(l - 1));
}

SyntheticForecast synthesize(const CarbonSeries& series, std::size_t datum_pos,
                             std::size_t horizon, const ForecastModel& model) {
    model.validate();
    if (datum_pos + horizon > series.size())
        throw RangeError("forecast window [" + std::to_string(datum_pos + 1) + ", " +
                         std::to_string(datum_pos + horizon) +
                         "] not covered by series of length " +
                         std::to_string(series.size()));

    // key the sign stream by the datum's absolute half-hour index so the
    // draw does not depend on how the series was sliced
    const std::uint64_t datum_abs = static_cast<std::uint64_t>(
        (series.start + static_cast<Timestamp>(datum_pos) * CarbonSeries::kStepSeconds) /
        CarbonSeries::kStepSeconds);

    auto one_step_abs = [&](std::size_t pos) {
        if (!series.has_forecast()) return model.fallback_rel_error;
        const double actual = series.actual[pos];
        if (actual == 0.0) return model.fallback_rel_error;
        return std::fabs(one_step_rel_error(actual, series.forecast1[pos]));
    };

    SyntheticForecast out;
    out.datum = series.time_at(datum_pos);  // start of the offset-1 interval
    out.values.resize(horizon);
    out.rel_errors.resize(horizon);

    const double scalar_eps =
        horizon > 0 && model.eps_mode == EpsMode::scalar ? one_step_abs(datum_pos) : 0.0;

    for (std::size_t i = 0; i < horizon; ++i) {
        const long l = static_cast<long>(i) + 1;
        const std::size_t pos = datum_pos + i;
        const double eps1 =
            model.eps_mode == EpsMode::scalar ? scalar_eps : one_step_abs(pos);
        const int sign = rng::sign_pm1(
            rng::keyed(model.sign_seed, kSignSalt, datum_abs, static_cast<std::uint64_t>(l)));
        double factor =
            1.0 + sign * scale_error_magnitude(eps1, l, model.lambda);
        if (factor < 0.0) factor = 0.0;  // intensity is physically non-negative
        out.values[i] = series.actual[pos] * factor;
        out.rel_errors[i] = factor - 1.0;
    }
    return out;
}

}  // namespace csched
