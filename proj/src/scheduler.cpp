#include "csched/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "csched/simplex.hpp"

namespace csched {

namespace {

constexpr double kFeasTol = 1e-9;  // SOC points

// Horizon constraints collapse onto session-end checkpoints: SOC is
// non-decreasing within a session, so the cap binds at the session end and
// the band minimum at the session entry. In cumulative charged SOC points
// (cum_s = total charged up to the end of session s):
//   cum_s <= cap_s       (SOC cap, cap_s rises as consumption is deducted)
//   cum_s >= need_s      (morning floor and next-day entry above soc_min)
struct Checkpoints {
    std::vector<double> cap;        // upper bound on cum at each session end
    std::vector<double> need;       // cumulative lower bound (monotone)
    std::vector<double> deduction;  // SOC points removed after session s
    double per_interval;            // max SOC points charged per interval
};

Checkpoints make_checkpoints(const HorizonProblem& p) {
    const std::size_t n = p.session_count();
    Checkpoints c;
    c.per_interval = p.battery.kwh_to_soc(p.battery.p_max_kw * p.delta_t_hours);
    c.deduction.resize(n, 0.0);
    for (std::size_t s = 0; s + 1 < n; ++s)
        c.deduction[s] = p.battery.kwh_to_soc(p.demands_kwh[s]);

    c.cap.resize(n);
    c.need.resize(n);
    double removed = 0.0;  // deductions applied before the current session
    double need_running = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        c.cap[s] = p.battery.soc_max - p.soc0 + removed;
        double need = p.morning_floors[s] - p.soc0 + removed;
        if (s + 1 < n) {
            // entry of the next session must not dip below the band minimum
            need = std::max(need,
                            p.battery.soc_min - p.soc0 + removed + c.deduction[s]);
        }
        need_running = std::max(need_running, std::max(need, 0.0));
        c.need[s] = need_running;
        removed += c.deduction[s];
    }
    return c;
}

// Max achievable cumulative charge at each checkpoint under the caps.
std::vector<double> achievable_profile(const HorizonProblem& p, const Checkpoints& c) {
    std::vector<double> a(p.session_count());
    double cum = 0.0;
    for (std::size_t s = 0; s < p.session_count(); ++s) {
        cum = std::min(c.cap[s],
                       cum + static_cast<double>(p.sessions[s].length()) * c.per_interval);
        a[s] = cum;
    }
    return a;
}

void check_feasible(const HorizonProblem& p, const Checkpoints& c) {
    const std::vector<double> a = achievable_profile(p, c);
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s] < c.need[s] - kFeasTol) {
            throw Infeasible(
                "session " + std::to_string(s + 1) + " end requirement (" +
                    std::to_string(c.need[s]) + " SOC pts cumulative) exceeds the " +
                    std::to_string(a[s]) + " achievable at max power",
                static_cast<int>(s + 1));
        }
    }
}

PowerSchedule schedule_from_energies(const HorizonProblem& p,
                                     const std::vector<double>& soc_pts_per_interval) {
    const Checkpoints c = make_checkpoints(p);
    PowerSchedule out;
    out.powers_kw.resize(p.session_count());
    out.predicted_soc.resize(p.session_count());
    double soc = p.soc0;
    double cost = 0.0;
    std::size_t idx = 0;
    for (std::size_t s = 0; s < p.session_count(); ++s) {
        if (s > 0) soc -= c.deduction[s - 1];
        const ChargingSession& sess = p.sessions[s];
        out.powers_kw[s].resize(sess.intensities.size());
        out.predicted_soc[s].reserve(sess.intensities.size() + 1);
        out.predicted_soc[s].push_back(soc);
        for (std::size_t j = 0; j < sess.intensities.size(); ++j, ++idx) {
            const double pts = soc_pts_per_interval[idx];
            const double kw = p.battery.soc_to_kwh(pts) / p.delta_t_hours;
            out.powers_kw[s][j] = kw;
            soc += pts;
            out.predicted_soc[s].push_back(soc);
            cost += sess.intensities[j] * kw * p.delta_t_hours;
        }
    }
    out.predicted_cost_gco2 = cost;
    return out;
}

}  // namespace

void BatteryParams::validate() const {
    if (!(capacity_kwh > 0) || !(p_max_kw > 0))
        throw Error("battery capacity and max power must be positive");
    if (!(0 <= soc_min && soc_min < soc_max && soc_max <= 100))
        throw Error("SOC band must satisfy 0 <= soc_min < soc_max <= 100");
}

long HorizonProblem::total_intervals() const {
    long n = 0;
    for (const auto& s : sessions) n += s.length();
    return n;
}

void HorizonProblem::validate() const {
    battery.validate();
    if (!(delta_t_hours > 0)) throw Error("delta_t must be positive");
    if (morning_floors.size() != sessions.size())
        throw Error("morning_floors must have one entry per session");
    if (!sessions.empty() && demands_kwh.size() != sessions.size() - 1)
        throw Error("demands must have N-1 entries");
    if (soc0 < battery.soc_min - kFeasTol || soc0 > battery.soc_max + kFeasTol)
        throw Error("soc0 outside the SOC band");
    long prev_end = 0;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        const ChargingSession& cs = sessions[s];
        if (cs.k_begin < 1 || cs.k_end < cs.k_begin)
            throw Error("session " + std::to_string(s + 1) + " has an empty window");
        if (cs.k_begin <= prev_end)
            throw Error("sessions must be ordered and non-overlapping");
        prev_end = cs.k_end;
        if (static_cast<long>(cs.intensities.size()) != cs.length())
            throw Error("session " + std::to_string(s + 1) +
                        " intensity count does not match its window");
        for (double v : cs.intensities)
            if (!std::isfinite(v) || v < 0)
                throw Error("intensities must be finite and non-negative");
        const double f = morning_floors[s];
        if (f < battery.soc_min - kFeasTol || f > battery.soc_max + kFeasTol)
            throw Error("morning floor outside the SOC band");
    }
    for (double d : demands_kwh)
        if (!std::isfinite(d) || d < 0) throw Error("demands must be non-negative");
}

double PowerSchedule::total_energy_kwh(double delta_t_hours) const {
    double e = 0.0;
    for (const auto& sess : powers_kw)
        for (double kw : sess) e += kw * delta_t_hours;
    return e;
}

PowerSchedule solve(const HorizonProblem& problem) {
    problem.validate();
    const std::size_t n = problem.session_count();
    if (n == 0) return PowerSchedule{};

    const Checkpoints c = make_checkpoints(problem);
    check_feasible(problem, c);

    const long m_intervals = problem.total_intervals();
    lp::Problem lp;
    lp.rows = n;
    lp.cols = static_cast<std::size_t>(m_intervals) + n;
    lp.obj.assign(lp.cols, 0.0);
    lp.mat.assign(lp.rows * lp.cols, 0.0);
    lp.rhs.assign(lp.rows, 0.0);
    lp.lower.assign(lp.cols, 0.0);
    lp.upper.assign(lp.cols, 0.0);

    double max_intensity = 0.0;
    for (const auto& sess : problem.sessions)
        for (double v : sess.intensities) max_intensity = std::max(max_intensity, v);
    // Infinitesimal index perturbation makes equal-intensity ties resolve
    // toward earlier intervals; J0 is reported on unperturbed costs.
    const double eps = 1e-9 * (max_intensity + 1.0) /
                       static_cast<double>(m_intervals + 1);

    std::size_t idx = 0;
    for (std::size_t s = 0; s < n; ++s) {
        for (double v : problem.sessions[s].intensities) {
            lp.obj[idx] = v + eps * static_cast<double>(idx);
            lp.lower[idx] = 0.0;
            lp.upper[idx] = c.per_interval;
            // interval idx contributes to every checkpoint at or after its session
            for (std::size_t t = s; t < n; ++t) lp.a(t, idx) = 1.0;
            ++idx;
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t w = static_cast<std::size_t>(m_intervals) + s;
        lp.a(s, w) = 1.0;
        lp.rhs[s] = c.cap[s];
        lp.lower[w] = 0.0;
        lp.upper[w] = std::max(0.0, c.cap[s] - c.need[s]);
    }

    const lp::Solution sol = lp::solve(lp);
    if (sol.status != lp::Status::optimal)
        throw Error("LP solver failed on a pre-checked feasible instance");

    std::vector<double> pts(sol.x.begin(), sol.x.begin() + m_intervals);
    for (double& v : pts) v = std::clamp(v, 0.0, c.per_interval);
    return schedule_from_energies(problem, pts);
}

PowerSchedule brute_force_oracle(const HorizonProblem& problem, int levels) {
    problem.validate();
    if (levels < 2) throw Error("oracle needs at least 2 power levels");
    const long m = problem.total_intervals();
    if (m > 16) throw TooLarge("oracle bound is 16 intervals, got " + std::to_string(m));
    double combos = 1.0;
    for (long i = 0; i < m; ++i) {
        combos *= levels;
        if (combos > 5e7) throw TooLarge("oracle grid too large to enumerate");
    }

    const Checkpoints c = make_checkpoints(problem);
    const double step_pts = c.per_interval / (levels - 1);
    const double tol = 1e-6;

    std::vector<int> digits(m, 0);
    std::vector<double> best;
    double best_cost = 0.0;
    bool found = false;

    while (true) {
        // simulate this candidate
        double soc_cum = 0.0;
        double cost = 0.0;
        bool ok = true;
        std::size_t idx = 0;
        for (std::size_t s = 0; s < problem.session_count() && ok; ++s) {
            for (double intensity : problem.sessions[s].intensities) {
                const double pts = digits[idx] * step_pts;
                soc_cum += pts;
                cost += intensity * problem.battery.soc_to_kwh(pts);
                ++idx;
            }
            if (soc_cum > c.cap[s] + tol || soc_cum < c.need[s] - tol) ok = false;
        }
        if (ok && (!found || cost < best_cost - 1e-12)) {
            found = true;
            best_cost = cost;
            best.resize(m);
            for (long i = 0; i < m; ++i) best[i] = digits[i] * step_pts;
        }
        // odometer
        long pos = m - 1;
        while (pos >= 0 && digits[pos] == levels - 1) digits[pos--] = 0;
        if (pos < 0) break;
        ++digits[pos];
    }
    if (!found) throw InfeasibleOnGrid("no feasible point on the power grid");
    return schedule_from_energies(problem, best);
}

PowerSchedule uncontrolled_schedule(const HorizonProblem& problem) {
    problem.validate();
    const Checkpoints c = make_checkpoints(problem);
    std::vector<double> pts;
    pts.reserve(problem.total_intervals());
    double soc = problem.soc0;
    bool meets = true;
    for (std::size_t s = 0; s < problem.session_count(); ++s) {
        if (s > 0) {
            soc -= c.deduction[s - 1];
            if (soc < problem.battery.soc_min - kFeasTol) meets = false;
        }
        for (long j = 0; j < problem.sessions[s].length(); ++j) {
            const double headroom = std::max(0.0, problem.battery.soc_max - soc);
            const double chunk = std::min(headroom, c.per_interval);
            pts.push_back(chunk);
            soc += chunk;
        }
        if (soc < problem.morning_floors[s] - kFeasTol) meets = false;
    }
    PowerSchedule out = schedule_from_energies(problem, pts);
    out.meets_floors = meets;
    return out;
}

std::vector<int> relax_to_achievable(HorizonProblem& problem) {
    problem.validate();
    std::vector<int> relaxed;
    const std::size_t n = problem.session_count();
    if (n == 0) return relaxed;
    const double q =
        problem.battery.kwh_to_soc(problem.battery.p_max_kw * problem.delta_t_hours);

    double cum_max = 0.0;   // max achievable cumulative charge
    double removed = 0.0;   // deductions applied so far (possibly clamped)
    for (std::size_t s = 0; s < n; ++s) {
        const double cap = problem.battery.soc_max - problem.soc0 + removed;
        cum_max = std::min(cap, cum_max + problem.sessions[s].length() * q);
        const double end_soc = problem.soc0 - removed + cum_max;
        bool touched = false;
        if (problem.morning_floors[s] > end_soc + kFeasTol) {
            problem.morning_floors[s] = std::max(problem.battery.soc_min, end_soc);
            touched = true;
        }
        if (s + 1 < n) {
            double dd = problem.battery.kwh_to_soc(problem.demands_kwh[s]);
            if (end_soc - dd < problem.battery.soc_min - kFeasTol) {
                dd = std::max(0.0, end_soc - problem.battery.soc_min);
                problem.demands_kwh[s] = problem.battery.soc_to_kwh(dd);
                touched = true;
            }
            removed += dd;
        }
        if (touched) relaxed.push_back(static_cast<int>(s + 1));
    }
    return relaxed;
}

double max_constraint_violation(const HorizonProblem& problem, const PowerSchedule& s) {
    const Checkpoints c = make_checkpoints(problem);
    double viol = 0.0;
    double soc = problem.soc0;
    for (std::size_t i = 0; i < problem.session_count(); ++i) {
        if (i > 0) soc -= c.deduction[i - 1];
        viol = std::max(viol, problem.battery.soc_min - soc);
        if (i < s.predicted_soc.size() && !s.predicted_soc[i].empty())
            viol = std::max(viol, std::fabs(s.predicted_soc[i].front() - soc));
        for (std::size_t j = 0; j < s.powers_kw[i].size(); ++j) {
            const double kw = s.powers_kw[i][j];
            viol = std::max(viol, problem.battery.kwh_to_soc(-kw * problem.delta_t_hours));
            viol = std::max(viol, problem.battery.kwh_to_soc(
                                      (kw - problem.battery.p_max_kw) *
                                      problem.delta_t_hours));
            soc += problem.battery.kwh_to_soc(kw * problem.delta_t_hours);
            viol = std::max(viol, soc - problem.battery.soc_max);
            if (i < s.predicted_soc.size() && j + 1 < s.predicted_soc[i].size())
                viol = std::max(viol, std::fabs(s.predicted_soc[i][j + 1] - soc));
        }
        viol = std::max(viol, problem.morning_floors[i] - soc);
    }
    return std::max(viol, 0.0);
}

}  // namespace csched
