#pragma once

// Shared randomized-instance generators for the scheduler tests and the
// acceptance suite. Instances are feasible by construction: floors are drawn
// below the max-power achievable profile and demands keep session entries at
// or above the band minimum.

#include <cstdint>
#include <vector>

#include "csched/det_rng.hpp"
#include "csched/scheduler.hpp"

namespace csched::testutil {

inline std::uint64_t urange(std::uint64_t h, std::uint64_t n) { return h % n; }

struct GenOptions {
    int max_total_intervals = 16;
    bool quanta_aligned = true;  // floors/demands in multiples of p_max*dt energy
    int max_sessions = 3;
};

inline HorizonProblem random_instance(std::uint64_t key, const GenOptions& opt = {}) {
    HorizonProblem p;
    p.battery = BatteryParams{50.0, 10.0, 20.0, 80.0};
    p.delta_t_hours = 0.5;
    const double q = p.battery.kwh_to_soc(p.battery.p_max_kw * p.delta_t_hours);  // 10 pts

    auto draw = [&](std::uint64_t salt, std::uint64_t n) {
        return urange(rng::keyed(key, 0xC0FFEE, salt), n);
    };
    auto drawf = [&](std::uint64_t salt) {
        return rng::uniform01(rng::keyed(key, 0xF00D, salt));
    };

    const int n_sessions = 1 + static_cast<int>(draw(1, opt.max_sessions));
    std::vector<int> lengths(n_sessions);
    int budget = opt.max_total_intervals;
    for (int s = 0; s < n_sessions; ++s) {
        const int remaining_sessions = n_sessions - s - 1;
        const int avail = budget - 2 * remaining_sessions;
        lengths[s] = 2 + static_cast<int>(draw(10 + s, std::max(1, avail - 1)));
        budget -= lengths[s];
    }

    p.soc0 = 10.0 * (2 + static_cast<int>(draw(2, 7)));  // 20..80

    long k = 1;
    for (int s = 0; s < n_sessions; ++s) {
        ChargingSession sess;
        sess.k_begin = k + (s == 0 ? 0 : 1 + static_cast<long>(draw(20 + s, 3)));
        sess.k_end = sess.k_begin + lengths[s] - 1;
        k = sess.k_end;
        sess.intensities.resize(lengths[s]);
        for (int j = 0; j < lengths[s]; ++j) {
            // coarse grid of intensities so equal-cost ties actually occur
            sess.intensities[j] = 50.0 * (1 + draw(100 + 31 * s + j, 9));
        }
        p.sessions.push_back(sess);
    }

    // floors/demands below the achievable profile
    double cum_max = 0.0, removed = 0.0;
    for (int s = 0; s < n_sessions; ++s) {
        const double cap = p.battery.soc_max - p.soc0 + removed;
        cum_max = std::min(cap, cum_max + lengths[s] * q);
        const double end_max = p.soc0 - removed + cum_max;
        double floor;
        if (opt.quanta_aligned) {
            const long steps = static_cast<long>((end_max - p.battery.soc_min) / q);
            floor = p.battery.soc_min + q * draw(200 + s, steps + 1);
        } else {
            floor = p.battery.soc_min + drawf(300 + s) * (end_max - p.battery.soc_min);
        }
        p.morning_floors.push_back(floor);
        if (s + 1 < n_sessions) {
            const double head = end_max - p.battery.soc_min;
            double dd_pts;
            if (opt.quanta_aligned) {
                const long steps = std::min<long>(3, static_cast<long>(head / q));
                dd_pts = q * draw(400 + s, steps + 1);
            } else {
                dd_pts = drawf(500 + s) * std::min(head, 30.0);
            }
            p.demands_kwh.push_back(p.battery.soc_to_kwh(dd_pts));
            removed += dd_pts;
        }
    }
    p.validate();
    return p;
}

// Cost of solving each session on its own, in order, with floors raised to
// cover the next day's draw (what a repeated N=1 controller commits to).
// Returns false when some single-session problem is infeasible.
inline bool concatenated_cost(const HorizonProblem& p, double& total) {
    total = 0.0;
    double soc = p.soc0;
    for (std::size_t s = 0; s < p.session_count(); ++s) {
        HorizonProblem one;
        one.battery = p.battery;
        one.delta_t_hours = p.delta_t_hours;
        one.soc0 = soc;
        ChargingSession sess = p.sessions[s];
        const long len = sess.length();
        sess.k_begin = 1;
        sess.k_end = len;
        one.sessions.push_back(sess);
        double floor = p.morning_floors[s];
        if (s + 1 < p.session_count()) {
            const double entry_need =
                p.battery.soc_min + p.battery.kwh_to_soc(p.demands_kwh[s]);
            floor = std::max(floor, entry_need);
            if (floor > p.battery.soc_max + 1e-9) return false;  // one day drains the band
            floor = std::min(floor, p.battery.soc_max);
        }
        one.morning_floors.push_back(floor);
        try {
            const PowerSchedule sched = solve(one);
            total += sched.predicted_cost_gco2;
            soc = sched.predicted_soc[0].back();
        } catch (const Infeasible&) {
            return false;
        }
        if (s + 1 < p.session_count()) soc -= p.battery.kwh_to_soc(p.demands_kwh[s]);
    }
    return true;
}

}  // namespace csched::testutil
