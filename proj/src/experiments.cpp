#include "csched/experiments.hpp"

#include <algorithm>
#include <future>

#include <json.hpp>

namespace csched {

namespace {

using nlohmann::json;

struct Aggregate {
    double c_ev = 0.0;  // pooled: mean emissions / mean energy
    double c_ev_min = 0.0;
    double c_ev_max = 0.0;
    double energy_kwh = 0.0;
    double emissions_gco2 = 0.0;
    long shortfalls = 0;
};

// Mean over replication seeds; every cell of an experiment grid runs the
// same seeds so that behavior realizations match pairwise across strategies.
Aggregate run_replicated(ScenarioConfig cfg, const CarbonSeries& series,
                         const std::vector<std::uint64_t>& seeds) {
    std::vector<std::future<SimResult>> futs;
    futs.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        ScenarioConfig c = cfg;
        c.seed = seed;
        futs.push_back(std::async(std::launch::async,
                                  [c, &series] { return run(c, series); }));
    }
    Aggregate agg;
    bool first = true;
    for (auto& f : futs) {
        const SimResult r = f.get();
        agg.energy_kwh += r.totals.energy_kwh;
        agg.emissions_gco2 += r.totals.emissions_gco2;
        agg.shortfalls += r.totals.shortfall_count;
        const double ce = r.totals.c_ev.value_or(0.0);
        agg.c_ev_min = first ? ce : std::min(agg.c_ev_min, ce);
        agg.c_ev_max = first ? ce : std::max(agg.c_ev_max, ce);
        first = false;
    }
    const double n = static_cast<double>(seeds.size());
    agg.energy_kwh /= n;
    agg.emissions_gco2 /= n;
    agg.c_ev = agg.energy_kwh > 0 ? agg.emissions_gco2 / agg.energy_kwh : 0.0;
    return agg;
}

json meta_json(const ExperimentBase& base, const CarbonSeries* series) {
    json m;
    m["tool_version"] = kToolVersion;
    m["seeds"] = base.seeds;
    if (series) m["data_hash"] = data_hash(*series);
    json c;
    c["from"] = format_iso8601(base.scenario.from);
    c["to"] = format_iso8601(base.scenario.to);
    c["morning_floor"] = base.scenario.morning_floor;
    c["initial_soc"] = base.scenario.initial_soc;
    c["battery_kwh"] = base.scenario.battery.capacity_kwh;
    c["p_max_kw"] = base.scenario.battery.p_max_kw;
    c["soc_min"] = base.scenario.battery.soc_min;
    c["soc_max"] = base.scenario.battery.soc_max;
    c["lambda"] = base.scenario.forecast.lambda;
    c["fallback_eps"] = base.scenario.forecast.fallback_rel_error;
    c["eps_mode"] = base.scenario.forecast.eps_mode == EpsMode::scalar ? "scalar"
                                                                       : "per-interval";
    c["perfect_forecast"] = base.scenario.perfect_forecast;
    m["config"] = c;
    return m;
}

std::string csv_num(double v) { return format_double(v); }

}  // namespace

std::vector<StrategyTableRow> strategy_table(const ExperimentBase& base,
                                             const CarbonSeries& series,
                                             const std::vector<int>& horizons) {
    std::vector<StrategyTableRow> rows;

    ScenarioConfig unc = base.scenario;
    unc.strategy = Strategy::uncontrolled;
    const Aggregate u = run_replicated(unc, series, base.seeds);
    StrategyTableRow urow;
    urow.strategy = "uncontrolled";
    urow.c_ev = u.c_ev;
    urow.c_ev_min = u.c_ev_min;
    urow.c_ev_max = u.c_ev_max;
    urow.pct_reduction = 0.0;
    urow.energy_kwh = u.energy_kwh;
    urow.emissions_gco2 = u.emissions_gco2;
    urow.shortfalls = u.shortfalls;
    rows.push_back(urow);

    for (int n : horizons) {
        ScenarioConfig cfg = base.scenario;
        cfg.strategy = Strategy::mpc;
        cfg.horizon_days = n;
        const Aggregate a = run_replicated(cfg, series, base.seeds);
        StrategyTableRow r;
        r.strategy = "mpc" + std::to_string(n);
        r.c_ev = a.c_ev;
        r.c_ev_min = a.c_ev_min;
        r.c_ev_max = a.c_ev_max;
        r.pct_reduction = u.c_ev > 0 ? 100.0 * (1.0 - a.c_ev / u.c_ev) : 0.0;
        r.energy_kwh = a.energy_kwh;
        r.emissions_gco2 = a.emissions_gco2;
        r.shortfalls = a.shortfalls;
        rows.push_back(r);
    }
    return rows;
}

std::string strategy_table_csv(const std::vector<StrategyTableRow>& rows) {
    std::string out =
        "strategy,c_ev_gco2_per_kwh,pct_reduction,energy_kwh,emissions_gco2,"
        "c_ev_min,c_ev_max,shortfalls\n";
    for (const auto& r : rows) {
        out += r.strategy + ',' + csv_num(r.c_ev) + ',' + csv_num(r.pct_reduction) + ',' +
               csv_num(r.energy_kwh) + ',' + csv_num(r.emissions_gco2) + ',' +
               csv_num(r.c_ev_min) + ',' + csv_num(r.c_ev_max) + ',' +
               std::to_string(r.shortfalls) + '\n';
    }
    return out;
}

std::string strategy_table_json(const std::vector<StrategyTableRow>& rows,
                                const ExperimentBase& base, const CarbonSeries& series) {
    json j;
    j["meta"] = meta_json(base, &series);
    j["rows"] = json::array();
    for (const auto& r : rows) {
        j["rows"].push_back({{"strategy", r.strategy},
                             {"c_ev_gco2_per_kwh", r.c_ev},
                             {"pct_reduction", r.pct_reduction},
                             {"energy_kwh", r.energy_kwh},
                             {"emissions_gco2", r.emissions_gco2},
                             {"c_ev_min", r.c_ev_min},
                             {"c_ev_max", r.c_ev_max},
                             {"shortfalls", r.shortfalls}});
    }
    return j.dump(2) + "\n";
}

std::vector<SweepRow> flexibility_sweep(const ExperimentBase& base,
                                        const CarbonSeries& series,
                                        const SweepAxes& axes) {
    std::vector<SweepRow> rows;
    const std::vector<std::pair<std::string, int>> placements = {
        {"overnight", axes.overnight_center_min}, {"daytime", axes.daytime_center_min}};

    for (const auto& [placement, center] : placements) {
        for (int hours : axes.window_hours) {
            for (double demand : axes.demands_kwh) {
                SweepRow row;
                row.placement = placement;
                row.window_hours = hours;
                row.demand_kwh = demand;

                FixedSchedule sched;
                const int len = hours * 60;
                sched.window_start_min = ((center - len / 2) % 1440 + 1440) % 1440;
                sched.window_duration_min = len;
                sched.daily_energy_kwh = demand;

                ScenarioConfig cfg = base.scenario;
                cfg.strategy = Strategy::mpc;
                cfg.horizon_days = axes.mpc_horizon;
                cfg.behavior = sched;
                try {
                    const Aggregate a = run_replicated(cfg, series, base.seeds);
                    row.c_ev = a.c_ev;
                    row.energy_kwh = a.energy_kwh;
                    row.emissions_gco2 = a.emissions_gco2;
                    row.shortfalls = a.shortfalls;
                } catch (const EmptyWindow&) {
                    row.feasible = false;
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "placement,window_hours,demand_kwh,feasible,c_ev_gco2_per_kwh,energy_kwh,"
        "emissions_gco2,shortfalls\n";
    for (const auto& r : rows) {
        out += r.placement + ',' + std::to_string(r.window_hours) + ',' +
               csv_num(r.demand_kwh) + ',' + (r.feasible ? "1" : "0") + ',';
        if (r.feasible)
            out += csv_num(r.c_ev) + ',' + csv_num(r.energy_kwh) + ',' +
                   csv_num(r.emissions_gco2) + ',' + std::to_string(r.shortfalls);
        else
            out += ",,,";
        out += '\n';
    }
    return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows, const ExperimentBase& base,
                       const CarbonSeries& series) {
    json j;
    j["meta"] = meta_json(base, &series);
    j["rows"] = json::array();
    for (const auto& r : rows) {
        json row = {{"placement", r.placement},
                    {"window_hours", r.window_hours},
                    {"demand_kwh", r.demand_kwh},
                    {"feasible", r.feasible}};
        if (r.feasible) {
            row["c_ev_gco2_per_kwh"] = r.c_ev;
            row["energy_kwh"] = r.energy_kwh;
            row["emissions_gco2"] = r.emissions_gco2;
            row["shortfalls"] = r.shortfalls;
        }
        j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

std::vector<RegionalRow> regional(const ExperimentBase& base,
                                  const std::map<int, CarbonSeries>& regional_series,
                                  const std::vector<int>& horizons) {
    std::vector<RegionalRow> rows;
    for (const auto& [region_id, series] : regional_series) {
        std::vector<RegionalRow> region_rows;
        try {
            ScenarioConfig unc = base.scenario;
            unc.strategy = Strategy::uncontrolled;
            const Aggregate u = run_replicated(unc, series, base.seeds);

            RegionalRow urow;
            urow.region_id = region_id;
            urow.region_name = series.region_name;
            urow.strategy = "uncontrolled";
            urow.c_ev = u.c_ev;
            urow.energy_kwh = u.energy_kwh;
            urow.emissions_gco2 = u.emissions_gco2;
            urow.shortfalls = u.shortfalls;
            region_rows.push_back(urow);

            for (int n : horizons) {
                ScenarioConfig cfg = base.scenario;
                cfg.strategy = Strategy::mpc;
                cfg.horizon_days = n;
                const Aggregate a = run_replicated(cfg, series, base.seeds);
                RegionalRow r;
                r.region_id = region_id;
                r.region_name = series.region_name;
                r.strategy = "mpc" + std::to_string(n);
                r.c_ev = a.c_ev;
                r.abs_reduction = u.c_ev - a.c_ev;
                r.pct_reduction = u.c_ev > 0 ? 100.0 * (1.0 - a.c_ev / u.c_ev) : 0.0;
                r.energy_kwh = a.energy_kwh;
                r.emissions_gco2 = a.emissions_gco2;
                r.shortfalls = a.shortfalls;
                region_rows.push_back(r);
            }
        } catch (const Error& e) {
            // a broken region must not sink the others
            region_rows.clear();
            RegionalRow bad;
            bad.region_id = region_id;
            bad.region_name = series.region_name;
            bad.strategy = "";
            bad.ok = false;
            bad.error = e.what();
            region_rows.push_back(bad);
        }
        rows.insert(rows.end(), region_rows.begin(), region_rows.end());
    }
    // keep the uncontrolled-then-horizons order within each region
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RegionalRow& a, const RegionalRow& b) {
                         return a.region_id < b.region_id;
                     });
    return rows;
}

std::string regional_csv(const std::vector<RegionalRow>& rows) {
    std::string out =
        "region_id,region_name,strategy,ok,error,c_ev_gco2_per_kwh,abs_reduction,"
        "pct_reduction,energy_kwh,emissions_gco2,shortfalls\n";
    for (const auto& r : rows) {
        out += std::to_string(r.region_id) + ',' + r.region_name + ',' + r.strategy + ',' +
               (r.ok ? "1" : "0") + ',' + r.error + ',';
        if (r.ok)
            out += csv_num(r.c_ev) + ',' + csv_num(r.abs_reduction) + ',' +
                   csv_num(r.pct_reduction) + ',' + csv_num(r.energy_kwh) + ',' +
                   csv_num(r.emissions_gco2) + ',' + std::to_string(r.shortfalls);
        else
            out += ",,,,,";
        out += '\n';
    }
    return out;
}

std::string regional_json(const std::vector<RegionalRow>& rows,
                          const ExperimentBase& base) {
    json j;
    j["meta"] = meta_json(base, nullptr);
    j["rows"] = json::array();
    for (const auto& r : rows) {
        json row = {{"region_id", r.region_id},
                    {"region_name", r.region_name},
                    {"strategy", r.strategy},
                    {"ok", r.ok}};
        if (r.ok) {
            row["c_ev_gco2_per_kwh"] = r.c_ev;
            row["abs_reduction"] = r.abs_reduction;
            row["pct_reduction"] = r.pct_reduction;
            row["energy_kwh"] = r.energy_kwh;
            row["emissions_gco2"] = r.emissions_gco2;
            row["shortfalls"] = r.shortfalls;
        } else {
            row["error"] = r.error;
        }
        j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

}  // namespace csched
