#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csched/api_client.hpp"
#include "csched/config.hpp"
#include "csched/experiments.hpp"
#include "csched/synth.hpp"

namespace {

using namespace csched;

Timestamp parse_when(const std::string& s) {
    if (s.size() == 10) return parse_date(s);
    return parse_iso8601(s);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

// Values shared by every subcommand. Defaults come from the scenario config
// file (when given); command-line flags override both.
struct CommonOpts {
    std::string config_path;
    double lambda = 9.97e-3;
    double fallback_eps = 0.02;
    std::string eps_mode = "per-interval";
    bool perfect_forecast = false;
    double morning_floor = 50.0;
    double initial_soc = 50.0;
    std::string cache_dir;
    std::uint64_t seed = 1;
    std::string resolve = "step";
    double battery_kwh = 50.0;
    double p_max_kw = 10.0;
    double soc_min = 20.0;
    double soc_max = 80.0;
    // behavior model
    double plugin_mean_min = 18 * 60;
    double plugin_sd_min = 60;
    double plugout_mean_min = 9 * 60;
    double plugout_sd_min = 60;
    double energy_mean = 5.8;
    double energy_sd = 2.67;
    double planning_quantile = 0.98;
    // optional fixed schedule (active when window hours > 0)
    double fixed_window_start_min = -1;
    double fixed_window_hours = 0;
    double fixed_demand = 11.28;
    // known high-consumption days: "day:floor,day:floor" raises the planned
    // morning floor for those (0-based) simulation days
    std::string floor_override;

    void load_config_defaults() {
        if (config_path.empty()) return;
        const KeyValueConfig c = KeyValueConfig::load(config_path);
        lambda = c.get_double("lambda", lambda);
        fallback_eps = c.get_double("fallback_eps", fallback_eps);
        eps_mode = c.get_string("eps_mode", eps_mode);
        perfect_forecast = c.get_bool("perfect_forecast", perfect_forecast);
        morning_floor = c.get_double("morning_floor", morning_floor);
        initial_soc = c.get_double("initial_soc", initial_soc);
        cache_dir = c.get_string("cache_dir", cache_dir);
        seed = static_cast<std::uint64_t>(c.get_long("seed", static_cast<long>(seed)));
        resolve = c.get_string("resolve", resolve);
        battery_kwh = c.get_double("battery_kwh", battery_kwh);
        p_max_kw = c.get_double("p_max_kw", p_max_kw);
        soc_min = c.get_double("soc_min", soc_min);
        soc_max = c.get_double("soc_max", soc_max);
        plugin_mean_min = c.get_double("plugin_mean_min", plugin_mean_min);
        plugin_sd_min = c.get_double("plugin_sd_min", plugin_sd_min);
        plugout_mean_min = c.get_double("plugout_mean_min", plugout_mean_min);
        plugout_sd_min = c.get_double("plugout_sd_min", plugout_sd_min);
        energy_mean = c.get_double("energy_mean_kwh", energy_mean);
        energy_sd = c.get_double("energy_sd_kwh", energy_sd);
        planning_quantile = c.get_double("planning_quantile", planning_quantile);
        fixed_window_start_min = c.get_double("fixed_window_start_min", fixed_window_start_min);
        fixed_window_hours = c.get_double("fixed_window_hours", fixed_window_hours);
        fixed_demand = c.get_double("fixed_demand_kwh", fixed_demand);
        floor_override = c.get_string("floor_override", floor_override);
    }

    ScenarioConfig scenario(Timestamp from, Timestamp to) const {
        ScenarioConfig cfg;
        cfg.battery = BatteryParams{battery_kwh, p_max_kw, soc_min, soc_max};
        cfg.from = from;
        cfg.to = to;
        cfg.morning_floor = morning_floor;
        cfg.initial_soc = initial_soc;
        cfg.seed = seed;
        cfg.perfect_forecast = perfect_forecast;
        cfg.forecast.lambda = lambda;
        cfg.forecast.fallback_rel_error = fallback_eps;
        cfg.forecast.eps_mode =
            eps_mode == "scalar" ? EpsMode::scalar : EpsMode::per_interval;
        cfg.resolve =
            resolve == "session" ? ResolveMode::per_session : ResolveMode::every_step;
        if (fixed_window_hours > 0) {
            FixedSchedule f;
            f.window_start_min = static_cast<int>(fixed_window_start_min);
            f.window_duration_min = static_cast<int>(fixed_window_hours * 60);
            f.daily_energy_kwh = fixed_demand;
            cfg.behavior = f;
        } else {
            BehaviorModel m;
            m.plugin_mean_min = plugin_mean_min;
            m.plugin_sd_min = plugin_sd_min;
            m.plugout_mean_min = plugout_mean_min;
            m.plugout_sd_min = plugout_sd_min;
            m.energy_mean_kwh = energy_mean;
            m.energy_sd_kwh = energy_sd;
            m.planning_quantile = planning_quantile;
            cfg.behavior = m;
        }
        std::string rest = floor_override;
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            const std::string item = rest.substr(0, comma);
            rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw Error("floor override entries must look like day:floor");
            cfg.floor_override[std::stol(item.substr(0, colon))] =
                std::stod(item.substr(colon + 1));
        }
        return cfg;
    }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "forecast MAPE growth per half-hour");
        cmd->add_option("--eps-mode", eps_mode, "per-interval|scalar");
        cmd->add_option("--fallback-eps", fallback_eps,
                        "relative error used when no one-step forecast exists");
        cmd->add_flag("--perfect-forecast", perfect_forecast,
                      "plan on actual intensities");
        cmd->add_option("--morning-floor", morning_floor, "minimum morning SOC, percent");
        cmd->add_option("--initial-soc", initial_soc, "SOC at simulation start, percent");
        cmd->add_option("--cache-dir", cache_dir,
                        "HTTP response cache (env CARBON_SCHED_CACHE_DIR)");
        cmd->add_option("--seed", seed, "base random seed");
        cmd->add_option("--resolve", resolve, "step|session re-solve cadence");
        cmd->add_option("--floor-override", floor_override,
                        "per-day floor raises, e.g. 12:70,40:65");
    }
};

std::vector<std::uint64_t> seed_list(std::uint64_t base, int replications) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < replications; ++i) seeds.push_back(base + i);
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carbon-aware EV overnight charging scheduler and simulator"};
    app.require_subcommand(1);

    CommonOpts common;
    // the config file sets defaults, so pull it out before regular parsing
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") common.config_path = argv[i + 1];
    try {
        common.load_config_defaults();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (common.cache_dir.empty())
        if (const char* env = std::getenv("CARBON_SCHED_CACHE_DIR")) common.cache_dir = env;
    app.add_option("--config", common.config_path, "scenario config file (key = value)");

    // --- fetch ---
    auto* fetch_cmd = app.add_subcommand("fetch", "download carbon-intensity data");
    std::string region_arg = "national", from_s, to_s, out_path, base_url, regions_file;
    std::string fill_arg = "none";
    fetch_cmd->add_option("--region", region_arg, "region id (1-14) or 'national'");
    fetch_cmd->add_option("--from", from_s, "start date (YYYY-MM-DD)")->required();
    fetch_cmd->add_option("--to", to_s, "end date, exclusive")->required();
    fetch_cmd->add_option("--out", out_path, "output CSV path")->required();
    fetch_cmd->add_option("--base-url", base_url, "API base URL");
    fetch_cmd->add_option("--fill", fill_arg, "none|linear gap policy");
    fetch_cmd->add_option("--regions-file", regions_file, "region registry CSV");
    common.add_flags(fetch_cmd);

    // --- synth ---
    auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic benchmark series");
    int synth_days = 373;
    std::string synth_start = "2022-01-01";
    std::uint64_t synth_seed = 42;
    synth_cmd->add_option("--days", synth_days, "number of days");
    synth_cmd->add_option("--start", synth_start, "first day (YYYY-MM-DD)");
    synth_cmd->add_option("--synth-seed", synth_seed, "signal seed");
    synth_cmd->add_option("--out", out_path, "output CSV path")->required();

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "run one charging scenario");
    std::string data_path, strategy_arg = "mpc", log_path;
    int horizon = 4;
    sim_cmd->add_option("--data", data_path, "carbon CSV")->required();
    sim_cmd->add_option("--strategy", strategy_arg, "uncontrolled|mpc");
    sim_cmd->add_option("--horizon", horizon, "MPC horizon in days");
    sim_cmd->add_option("--from", from_s, "start date")->required();
    sim_cmd->add_option("--to", to_s, "end date, exclusive")->required();
    sim_cmd->add_option("--out", out_path, "totals JSON path");
    sim_cmd->add_option("--log", log_path, "step-log CSV path");
    double fx_start = -1, fx_hours = 0, fx_demand = 11.28;
    sim_cmd->add_option("--fixed-window-start", fx_start,
                        "fixed window start, minutes from midnight");
    sim_cmd->add_option("--fixed-window-hours", fx_hours, "fixed window length, hours");
    sim_cmd->add_option("--fixed-demand", fx_demand, "fixed daily energy, kWh");
    common.add_flags(sim_cmd);

    // --- table1 ---
    auto* table_cmd = app.add_subcommand("table1", "year-long strategy comparison");
    std::vector<int> horizons = {1, 2, 4, 7};
    int replications = 5;
    std::string out_prefix = "table1";
    table_cmd->add_option("--data", data_path, "carbon CSV")->required();
    table_cmd->add_option("--from", from_s, "start date")->required();
    table_cmd->add_option("--to", to_s, "end date, exclusive")->required();
    table_cmd->add_option("--horizons", horizons, "MPC horizons");
    table_cmd->add_option("--replications", replications, "seeds per strategy");
    table_cmd->add_option("--out-prefix", out_prefix, "writes <prefix>.csv and .json");
    common.add_flags(table_cmd);

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "plug-in flexibility sweep");
    SweepAxes axes;
    sweep_cmd->add_option("--data", data_path, "carbon CSV")->required();
    sweep_cmd->add_option("--from", from_s, "start date")->required();
    sweep_cmd->add_option("--to", to_s, "end date, exclusive")->required();
    sweep_cmd->add_option("--windows", axes.window_hours, "window lengths, hours");
    sweep_cmd->add_option("--demands", axes.demands_kwh, "daily demands, kWh");
    sweep_cmd->add_option("--horizon", axes.mpc_horizon, "MPC horizon in days");
    sweep_cmd->add_option("--overnight-center", axes.overnight_center_min,
                          "overnight anchor, minutes from midnight");
    sweep_cmd->add_option("--daytime-center", axes.daytime_center_min,
                          "daytime anchor, minutes from midnight");
    sweep_cmd->add_option("--replications", replications, "seeds per cell");
    sweep_cmd->add_option("--out-prefix", out_prefix, "writes <prefix>.csv and .json");
    common.add_flags(sweep_cmd);

    // --- regional ---
    auto* regional_cmd = app.add_subcommand("regional", "14-region comparison");
    std::vector<int> region_ids;
    std::string data_dir;
    bool do_fetch = false;
    regional_cmd->add_option("--regions", region_ids, "region ids (default: registry)");
    regional_cmd->add_option("--data-dir", data_dir,
                             "directory with region_<id>.csv files");
    regional_cmd->add_flag("--fetch", do_fetch, "fetch missing regions from the API");
    regional_cmd->add_option("--from", from_s, "start date")->required();
    regional_cmd->add_option("--to", to_s, "end date, exclusive")->required();
    regional_cmd->add_option("--horizons", horizons, "MPC horizons");
    regional_cmd->add_option("--replications", replications, "seeds per cell");
    regional_cmd->add_option("--regions-file", regions_file, "region registry CSV");
    regional_cmd->add_option("--base-url", base_url, "API base URL");
    regional_cmd->add_option("--out-prefix", out_prefix, "writes <prefix>.csv and .json");
    common.add_flags(regional_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        const std::vector<Region> registry =
            regions_file.empty() ? default_regions() : load_regions_file(regions_file);

        if (*synth_cmd) {
            SynthParams p;
            p.days = synth_days;
            p.seed = synth_seed;
            const CarbonSeries s = make_synthetic_series(parse_date(synth_start), p);
            save_carbon_csv_file(s, out_path);
            std::cout << "wrote " << s.size() << " intervals to " << out_path << "\n";
            return 0;
        }

        if (*fetch_cmd) {
            FetchOptions opt;
            if (!base_url.empty()) opt.base_url = base_url;
            opt.cache_dir = common.cache_dir;
            opt.fill = fill_arg == "linear" ? FillPolicy::linear : FillPolicy::none;
            opt.registry = &registry;
            const int region =
                region_arg == "national" ? kNationalRegionId : std::stoi(region_arg);
            const CarbonSeries s =
                fetch_region(region, parse_when(from_s), parse_when(to_s), opt);
            save_carbon_csv_file(s, out_path);
            std::cout << "wrote " << s.size() << " intervals to " << out_path << "\n";
            return 0;
        }

        const Timestamp from = parse_when(from_s);
        const Timestamp to = parse_when(to_s);

        if (*sim_cmd) {
            if (fx_hours > 0) {
                common.fixed_window_hours = fx_hours;
                common.fixed_window_start_min = fx_start >= 0 ? fx_start : 20 * 60 + 30;
                common.fixed_demand = fx_demand;
            }
            ScenarioConfig cfg = common.scenario(from, to);
            cfg.strategy =
                strategy_arg == "uncontrolled" ? Strategy::uncontrolled : Strategy::mpc;
            cfg.horizon_days = horizon;
            const CarbonSeries series = load_carbon_csv_file(data_path);
            const SimResult result = run(cfg, series);
            const std::string json = totals_to_json(result, cfg, series);
            if (out_path.empty())
                std::cout << json;
            else
                write_file(out_path, json);
            if (!log_path.empty()) write_file(log_path, log_to_csv(result.log));
            return 0;
        }

        ExperimentBase base;
        base.scenario = common.scenario(from, to);
        base.seeds = seed_list(common.seed, replications);

        if (*table_cmd) {
            const CarbonSeries series = load_carbon_csv_file(data_path);
            const auto rows = strategy_table(base, series, horizons);
            write_file(out_prefix + ".csv", strategy_table_csv(rows));
            write_file(out_prefix + ".json", strategy_table_json(rows, base, series));
            std::cout << strategy_table_csv(rows);
            return 0;
        }

        if (*sweep_cmd) {
            const CarbonSeries series = load_carbon_csv_file(data_path);
            const auto rows = flexibility_sweep(base, series, axes);
            write_file(out_prefix + ".csv", sweep_csv(rows));
            write_file(out_prefix + ".json", sweep_json(rows, base, series));
            std::cout << sweep_csv(rows);
            return 0;
        }

        if (*regional_cmd) {
            if (region_ids.empty())
                for (const Region& r : registry) region_ids.push_back(r.id);
            std::map<int, CarbonSeries> data;
            for (int id : region_ids) {
                const std::string path =
                    data_dir.empty() ? std::string{}
                                     : data_dir + "/region_" + std::to_string(id) + ".csv";
                if (!path.empty() && std::ifstream(path).good()) {
                    CarbonSeries s = load_carbon_csv_file(path);
                    s.region_id = id;
                    s.region_name = find_region(registry, id).name;
                    data.emplace(id, std::move(s));
                } else if (do_fetch) {
                    FetchOptions opt;
                    if (!base_url.empty()) opt.base_url = base_url;
                    opt.cache_dir = common.cache_dir;
                    opt.registry = &registry;
                    data.emplace(id, fetch_region(id, from, to, opt));
                } else {
                    throw Error("no data for region " + std::to_string(id) +
                                " (give --data-dir or --fetch)");
                }
            }
            const auto rows = regional(base, data, horizons);
            write_file(out_prefix + ".csv", regional_csv(rows));
            write_file(out_prefix + ".json", regional_json(rows, base));
            std::cout << regional_csv(rows);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
