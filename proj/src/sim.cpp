#include "csched/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "csched/det_rng.hpp"

#include <json.hpp>

namespace csched {

namespace {

constexpr double kSocDust = 1e-7;  // numerical allowance on band edges
constexpr std::uint64_t kForecastSalt = 0xfc57a11ce0f2b6d9ULL;

struct RealizedSession {
    Timestamp plug_in;
    Timestamp plug_out;
    double day_energy_kwh;
};

struct PlannedSessionSpec {
    int start_min;     // minutes from the day's midnight
    int duration_min;  // grid-aligned
};

Timestamp floor_to_day(Timestamp t) {
    Timestamp d = t - (t % kSecondsPerDay);
    if (d > t) d -= kSecondsPerDay;
    return d;
}

long floor_div_day(Timestamp t, Timestamp origin) {
    const Timestamp diff = t - origin;
    long q = static_cast<long>(diff / kSecondsPerDay);
    if (diff % kSecondsPerDay != 0 && diff < 0) --q;
    return q;
}

// Rolling state shared by the strategies.
struct Engine {
    const ScenarioConfig& cfg;
    const CarbonSeries& series;
    TimeGrid grid;
    PlannedSessionSpec planned;
    double planned_energy_kwh;
    Timestamp day0;                         // midnight containing cfg.from
    long first_day;                         // -1: the night already underway at start
    std::vector<RealizedSession> realized;  // by day - first_day
    ForecastModel fc;

    std::vector<StepRecord> log;
    std::vector<SimEvent> events;
    double soc;

    Engine(const ScenarioConfig& c, const CarbonSeries& s)
        : cfg(c), series(s), grid(0.5, 48, s.start), soc(c.initial_soc) {
        day0 = floor_to_day(cfg.from);
        first_day = -1;
        const long n_days =
            static_cast<long>((floor_to_day(cfg.to - 1) - day0) / kSecondsPerDay) + 2;

        if (const auto* model = std::get_if<BehaviorModel>(&cfg.behavior)) {
            BehaviorModel m = *model;
            m.seed = cfg.seed;
            const PlannedWindow w = conservative_window(m);
            planned = {w.start_min_grid, static_cast<int>(w.duration_grid_min())};
            planned_energy_kwh = conservative_energy(m);
            for (long d = first_day; d < n_days; ++d) {
                const SessionRealization r = sample_day(m, d, day0 + d * kSecondsPerDay);
                realized.push_back({r.plug_in, r.plug_out, r.day_energy_kwh});
            }
        } else {
            const FixedSchedule& f = std::get<FixedSchedule>(cfg.behavior);
            f.validate();
            planned = {f.window_start_min, f.window_duration_min};
            planned_energy_kwh = f.daily_energy_kwh;
            for (long d = first_day; d < n_days; ++d) {
                const Timestamp t0 = day0 + d * kSecondsPerDay +
                                     static_cast<Timestamp>(f.window_start_min) * 60;
                realized.push_back(
                    {t0, t0 + static_cast<Timestamp>(f.window_duration_min) * 60,
                     f.daily_energy_kwh});
            }
        }

        fc = cfg.forecast;
        fc.sign_seed = rng::keyed(cfg.seed, fc.sign_seed, kForecastSalt);
    }

    const RealizedSession* session_of_day(long d) const {
        const long idx = d - first_day;
        if (idx < 0 || idx >= static_cast<long>(realized.size())) return nullptr;
        return &realized[idx];
    }

    bool plugged_at(Timestamp t) const {
        const long d = floor_div_day(t, day0);
        // a session anchored on day d or d-1 can cover t
        for (long dd = d - 1; dd <= d; ++dd) {
            const RealizedSession* r = session_of_day(dd);
            if (r && r->plug_in <= t && t < r->plug_out) return true;
        }
        return false;
    }

    Timestamp planned_start(long d) const {
        return day0 + d * kSecondsPerDay + static_cast<Timestamp>(planned.start_min) * 60;
    }
    Timestamp planned_end(long d) const {
        return planned_start(d) + static_cast<Timestamp>(planned.duration_min) * 60;
    }

    // Day whose planned window covers t, or nullopt.
    std::optional<long> planned_day_at(Timestamp t) const {
        const long d = floor_div_day(t, day0);
        for (long dd = d - 1; dd <= d; ++dd)
            if (planned_start(dd) <= t && t < planned_end(dd)) return dd;
        return std::nullopt;
    }

    double morning_floor_for(long d) const {
        const auto it = cfg.floor_override.find(d);
        return it == cfg.floor_override.end() ? cfg.morning_floor : it->second;
    }

    void add_event(Timestamp t, const char* kind, std::string detail) {
        events.push_back(SimEvent{t, kind, std::move(detail)});
    }

    void apply_deduction(Timestamp t, double kwh) {
        const double pts = cfg.battery.kwh_to_soc(kwh);
        double next = soc - pts;
        if (next < cfg.battery.soc_min) {
            add_event(t, "consumption_shortfall",
                      "draw of " + format_double(kwh) + " kWh exceeds stored energy; SOC floored");
            next = cfg.battery.soc_min;
        }
        soc = next;
    }

    // Build and solve the horizon problem anchored at interval start t
    // (inside the planned window of day d0). Returns per-interval powers for
    // the remainder of the current planned session.
    std::vector<double> solve_window(Timestamp t, long d0) {
        const std::size_t datum_pos = series.index_of(t);
        const std::int64_t step = CarbonSeries::kStepSeconds;

        HorizonProblem prob;
        prob.battery = cfg.battery;
        prob.delta_t_hours = grid.delta_t_hours;
        prob.soc0 = soc;

        long last_offset = 0;
        for (int j = 0; j < cfg.horizon_days; ++j) {
            const long d = d0 + j;
            Timestamp a = j == 0 ? t : planned_start(d);
            Timestamp b = planned_end(d);
            if (a >= cfg_series_end()) break;
            b = std::min(b, cfg_series_end());
            if (b <= a) continue;
            ChargingSession sess;
            sess.k_begin = static_cast<long>((a - t) / step) + 1;
            sess.k_end = static_cast<long>((b - t) / step);
            if (sess.k_end < sess.k_begin) continue;
            prob.sessions.push_back(sess);
            prob.morning_floors.push_back(morning_floor_for(d));
            last_offset = prob.sessions.back().k_end;
        }
        if (prob.sessions.empty()) return {};
        prob.demands_kwh.assign(prob.sessions.size() - 1, planned_energy_kwh);

        // predicted intensities for every session interval
        std::vector<double> predicted(static_cast<std::size_t>(last_offset));
        if (cfg.perfect_forecast) {
            for (long l = 1; l <= last_offset; ++l)
                predicted[l - 1] = series.actual[datum_pos + l - 1];
        } else {
            const SyntheticForecast f =
                synthesize(series, datum_pos, static_cast<std::size_t>(last_offset), fc);
            predicted = f.values;
        }
        for (auto& sess : prob.sessions) {
            sess.intensities.assign(predicted.begin() + (sess.k_begin - 1),
                                    predicted.begin() + sess.k_end);
        }

        PowerSchedule sched;
        try {
            sched = solve(prob);
        } catch (const Infeasible& e) {
            const std::vector<int> relaxed = relax_to_achievable(prob);
            std::string which;
            for (int s : relaxed) which += (which.empty() ? "" : ",") + std::to_string(s);
            add_event(t, "floor_relaxed",
                      "horizon infeasible (session " + std::to_string(e.first_bad_session) +
                          "); relaxed sessions " + which);
            sched = solve(prob);
        }
        return sched.powers_kw.front();
    }

    Timestamp cfg_series_end() const { return series.end(); }
};

}  // namespace

void FixedSchedule::validate() const {
    if (window_start_min < 0 || window_start_min >= 24 * 60 ||
        window_start_min % 30 != 0 || window_duration_min <= 0 ||
        window_duration_min % 30 != 0 || window_duration_min > 24 * 60)
        throw Error("fixed schedule window must be grid-aligned, non-empty and at most a day");
    if (daily_energy_kwh < 0) throw Error("daily energy must be non-negative");
}

void ScenarioConfig::validate() const {
    battery.validate();
    if (horizon_days < 1) throw Error("horizon must span at least one day");
    if (morning_floor < battery.soc_min || morning_floor > battery.soc_max)
        throw Error("morning floor must lie inside the SOC band");
    if (initial_soc < battery.soc_min || initial_soc > battery.soc_max)
        throw Error("initial SOC must lie inside the SOC band");
    if (from >= to) throw Error("scenario range must satisfy from < to");
    if (!is_half_hour_aligned(from) || !is_half_hour_aligned(to))
        throw Error("scenario range must be half-hour aligned");
    for (const auto& [day, floor] : floor_override)
        if (floor < battery.soc_min || floor > battery.soc_max)
            throw Error("floor override for day " + std::to_string(day) +
                        " outside the SOC band");
    forecast.validate();
}

SimResult run(const ScenarioConfig& config, const CarbonSeries& series) {
    config.validate();
    if (!series.covers(config.from, config.to))
        throw RangeError("scenario range not covered by the carbon series");

    Engine eng(config, series);

    // plug-in deductions pending, ordered by time
    std::vector<std::pair<Timestamp, double>> deductions;
    for (long d = eng.first_day; d < eng.first_day + static_cast<long>(eng.realized.size());
         ++d) {
        const RealizedSession* r = eng.session_of_day(d);
        if (r && r->plug_in >= config.from && r->plug_in < config.to)
            deductions.emplace_back(r->plug_in, r->day_energy_kwh);
    }
    std::sort(deductions.begin(), deductions.end());
    std::size_t next_deduction = 0;

    // morning-floor checks at realized plug-outs inside the range
    std::vector<std::pair<Timestamp, long>> plugouts;
    for (long d = eng.first_day; d < eng.first_day + static_cast<long>(eng.realized.size());
         ++d) {
        const RealizedSession* r = eng.session_of_day(d);
        if (r && r->plug_out >= config.from && r->plug_out < config.to)
            plugouts.emplace_back(r->plug_out, d);
    }
    std::sort(plugouts.begin(), plugouts.end());
    std::size_t next_plugout = 0;

    const std::int64_t step = CarbonSeries::kStepSeconds;
    const double dt = 0.5;

    // per-session solve cache (resolve == per_session)
    std::vector<double> cached_powers;
    Timestamp cached_window_start = -1;
    Timestamp cached_t0 = 0;

    for (Timestamp t = config.from; t < config.to; t += step) {
        // events that occurred since the previous boundary
        while (next_plugout < plugouts.size() && plugouts[next_plugout].first <= t) {
            const long d = plugouts[next_plugout].second;
            if (eng.soc < eng.morning_floor_for(d) - kSocDust)
                eng.add_event(plugouts[next_plugout].first, "morning_shortfall",
                              "SOC " + format_double(eng.soc) + " below floor " +
                                  format_double(eng.morning_floor_for(d)) +
                                  " at plug-out");
            ++next_plugout;
        }
        while (next_deduction < deductions.size() && deductions[next_deduction].first <= t) {
            eng.apply_deduction(deductions[next_deduction].first,
                                deductions[next_deduction].second);
            ++next_deduction;
        }

        const bool plugged = eng.plugged_at(t);
        double power_kw = 0.0;

        if (plugged) {
            if (config.strategy == Strategy::uncontrolled) {
                const double headroom_kwh =
                    config.battery.soc_to_kwh(std::max(0.0, config.battery.soc_max - eng.soc));
                power_kw = std::min(config.battery.p_max_kw, headroom_kwh / dt);
            } else if (const auto day = eng.planned_day_at(t)) {
                if (config.resolve == ResolveMode::every_step) {
                    const std::vector<double> powers = eng.solve_window(t, *day);
                    if (!powers.empty()) power_kw = powers.front();
                } else {
                    const Timestamp wstart = eng.planned_start(*day);
                    if (cached_window_start != wstart) {
                        cached_powers = eng.solve_window(t, *day);
                        cached_window_start = wstart;
                        cached_t0 = t;
                    }
                    const std::size_t idx =
                        static_cast<std::size_t>((t - cached_t0) / step);
                    if (idx < cached_powers.size()) power_kw = cached_powers[idx];
                }
            }
        }

        const double intensity = series.actual[series.index_of(t)];
        const double emitted = power_kw * dt * intensity;
        eng.soc += config.battery.kwh_to_soc(power_kw * dt);
        if (eng.soc > config.battery.soc_max) {
            assert(eng.soc < config.battery.soc_max + kSocDust);
            eng.soc = config.battery.soc_max;
        }
        eng.log.push_back(StepRecord{t, plugged, power_kw, eng.soc, intensity, emitted});
    }

    SimResult result;
    result.log = std::move(eng.log);
    result.events = std::move(eng.events);
    result.totals = compute_metrics(result.log, static_cast<long>(result.events.size()));
    result.final_soc = eng.soc;
    return result;
}

SimTotals compute_metrics(const std::vector<StepRecord>& log, long shortfalls) {
    if (log.empty()) throw EmptyLog("cannot aggregate an empty step log");
    SimTotals t;
    for (const StepRecord& r : log) {
        t.energy_kwh += r.power_kw * 0.5;
        t.emissions_gco2 += r.emitted_gco2;
    }
    if (t.energy_kwh > 0) t.c_ev = t.emissions_gco2 / t.energy_kwh;
    t.shortfall_count = shortfalls;
    return t;
}

std::vector<double> cumulative_emissions(const std::vector<StepRecord>& log) {
    std::vector<double> out;
    out.reserve(log.size());
    double acc = 0.0;
    for (const StepRecord& r : log) {
        acc += r.emitted_gco2;
        out.push_back(acc);
    }
    return out;
}

std::vector<SessionBreakdown> session_breakdown(const std::vector<StepRecord>& log) {
    std::vector<SessionBreakdown> out;
    bool open = false;
    for (const StepRecord& r : log) {
        if (r.plugged && !open) {
            out.push_back(SessionBreakdown{r.t, r.t, 0.0, 0.0});
            open = true;
        }
        if (!r.plugged) {
            open = false;
            continue;
        }
        out.back().end = r.t + CarbonSeries::kStepSeconds;
        out.back().energy_kwh += r.power_kw * 0.5;
        out.back().emissions_gco2 += r.emitted_gco2;
    }
    return out;
}

std::string log_to_csv(const std::vector<StepRecord>& log) {
    std::string out =
        "timestamp,plugged,power_kw,soc_pct,actual_gco2_per_kwh,emitted_gco2\n";
    for (const StepRecord& r : log) {
        out += format_iso8601(r.t);
        out += r.plugged ? ",1," : ",0,";
        out += format_double(r.power_kw);
        out += ',';
        out += format_double(r.soc);
        out += ',';
        out += format_double(r.actual_intensity);
        out += ',';
        out += format_double(r.emitted_gco2);
        out += '\n';
    }
    return out;
}

std::string totals_to_json(const SimResult& result, const ScenarioConfig& config,
                           const CarbonSeries& series) {
    nlohmann::json j;
    j["meta"]["strategy"] =
        config.strategy == Strategy::uncontrolled
            ? "uncontrolled"
            : "mpc" + std::to_string(config.horizon_days);
    j["meta"]["from"] = format_iso8601(config.from);
    j["meta"]["to"] = format_iso8601(config.to);
    j["meta"]["seed"] = config.seed;
    j["meta"]["perfect_forecast"] = config.perfect_forecast;
    j["meta"]["morning_floor"] = config.morning_floor;
    j["meta"]["data_hash"] = data_hash(series);
    j["totals"]["energy_kwh"] = result.totals.energy_kwh;
    j["totals"]["emissions_gco2"] = result.totals.emissions_gco2;
    if (result.totals.c_ev)
        j["totals"]["c_ev_gco2_per_kwh"] = *result.totals.c_ev;
    else
        j["totals"]["c_ev_gco2_per_kwh"] = nullptr;
    j["totals"]["shortfall_events"] = result.totals.shortfall_count;
    j["totals"]["final_soc_pct"] = result.final_soc;
    nlohmann::json ev = nlohmann::json::array();
    for (const SimEvent& e : result.events)
        ev.push_back({{"t", format_iso8601(e.t)}, {"kind", e.kind}, {"detail", e.detail}});
    j["events"] = ev;
    return j.dump(2) + "\n";
}

}  // namespace csched
