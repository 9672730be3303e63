#include "csched/behavior.hpp"

#include <cmath>

#include "csched/det_rng.hpp"
#include "csched/errors.hpp"

namespace csched {

namespace {
enum DrawKind : std::uint64_t { kPlugIn = 1, kPlugOut = 2, kEnergy = 3 };
constexpr std::uint64_t kBehaviorSalt = 0xb41a7e55aa170901ULL;

double normal_draw(const BehaviorModel& m, long day, std::uint64_t kind,
                   std::uint64_t attempt) {
    return rng::normal(rng::keyed(m.seed ^ kBehaviorSalt,
                                  static_cast<std::uint64_t>(day), kind, attempt));
}
}  // namespace

void BehaviorModel::validate() const {
    if (!(plugin_sd_min > 0) || !(plugout_sd_min > 0) || !(energy_sd_kwh >= 0))
        throw Error("behavior standard deviations must be positive");
    if (!(planning_quantile > 0.5 && planning_quantile < 1.0))
        throw Error("planning quantile must lie in (0.5, 1)");
}

PlannedWindow conservative_window(const BehaviorModel& model, int grid_step_min) {
    model.validate();
    const double z = rng::norm_quantile(model.planning_quantile);
    PlannedWindow w;
    w.start_min = model.plugin_mean_min + z * model.plugin_sd_min;
    w.end_min = model.plugout_mean_min - z * model.plugout_sd_min;
    // shrink toward the inside of the window: start up, end down
    w.start_min_grid =
        static_cast<int>(std::ceil(w.start_min / grid_step_min)) * grid_step_min;
    w.end_min_grid =
        static_cast<int>(std::floor(w.end_min / grid_step_min)) * grid_step_min;
    if (w.duration_grid_min() <= 0)
        throw EmptyWindow("conservative window is empty after grid quantization");
    return w;
}

double conservative_energy(const BehaviorModel& model) {
    model.validate();
    return model.energy_mean_kwh +
           rng::norm_quantile(model.planning_quantile) * model.energy_sd_kwh;
}

SessionRealization sample_day(const BehaviorModel& model, long day_index,
                              Timestamp day_midnight) {
    model.validate();
    SessionRealization r;
    const double in_min =
        model.plugin_mean_min + model.plugin_sd_min * normal_draw(model, day_index, kPlugIn, 0);
    r.plug_in = day_midnight + static_cast<Timestamp>(std::llround(in_min * 60.0));

    // plug-out belongs to the next morning
    for (std::uint64_t attempt = 0;; ++attempt) {
        const double out_min = model.plugout_mean_min +
                               model.plugout_sd_min *
                                   normal_draw(model, day_index, kPlugOut, attempt);
        r.plug_out = day_midnight + kSecondsPerDay +
                     static_cast<Timestamp>(std::llround(out_min * 60.0));
        if (r.plug_out > r.plug_in) break;
    }

    // truncated-at-zero energy draw; resample rather than clamp to avoid a
    // point mass at zero
    for (std::uint64_t attempt = 0;; ++attempt) {
        r.day_energy_kwh = model.energy_mean_kwh +
                           model.energy_sd_kwh *
                               normal_draw(model, day_index, kEnergy, attempt);
        if (r.day_energy_kwh >= 0) break;
    }
    return r;
}

}  // namespace csched
