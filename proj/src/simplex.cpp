#include "csched/simplex.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

namespace csched::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kPrimalTol = 1e-9;
constexpr int kDegenerateRunBeforeBland = 64;
constexpr long kMaxIterations = 200000;

enum class VarState : std::uint8_t { at_lower, at_upper, basic };

// LU with partial pivoting for the (small) basis matrix.
struct Lu {
    std::size_t n = 0;
    std::vector<double> f;        // factored matrix
    std::vector<std::size_t> pr;  // row permutation
    bool singular = false;

    void factor(const std::vector<double>& m, std::size_t dim) {
        n = dim;
        f = m;
        pr.resize(n);
        for (std::size_t i = 0; i < n; ++i) pr[i] = i;
        singular = false;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::fabs(f[pr[k] * n + k]);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double v = std::fabs(f[pr[i] * n + k]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < 1e-12) {
                singular = true;
                return;
            }
            std::swap(pr[k], pr[piv]);
            const double d = f[pr[k] * n + k];
            for (std::size_t i = k + 1; i < n; ++i) {
                const double l = f[pr[i] * n + k] / d;
                f[pr[i] * n + k] = l;
                for (std::size_t j = k + 1; j < n; ++j)
                    f[pr[i] * n + j] -= l * f[pr[k] * n + j];
            }
        }
    }

    // Solve M x = b.
    void solve(const std::vector<double>& b, std::vector<double>& x) const {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[pr[i]];
            for (std::size_t j = 0; j < i; ++j) s -= f[pr[i] * n + j] * y[j];
            y[i] = s;
        }
        x.assign(n, 0.0);
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= f[pr[ii] * n + j] * x[j];
            x[ii] = s / f[pr[ii] * n + ii];
        }
    }

    // Solve M^T y = c.
    void solve_transposed(const std::vector<double>& c, std::vector<double>& y) const {
        // M = P^-1 L U  =>  M^T = U^T L^T P; solve U^T z = c, L^T w = z, y = P^T w.
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = c[i];
            for (std::size_t j = 0; j < i; ++j) s -= f[pr[j] * n + i] * z[j];
            z[i] = s / f[pr[i] * n + i];
        }
        std::vector<double> w(n);
        for (std::size_t ii = n; ii-- > 0;) {
            double s = z[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= f[pr[j] * n + ii] * w[j];
            w[ii] = s;
        }
        y.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) y[pr[i]] = w[i];
    }
};

struct Tableau {
    std::size_t m, n_total;  // rows, structural + artificial columns
    const Problem* prob;
    std::vector<double> art_sign;  // per row, sign of its artificial column
    std::vector<double> cost;      // current phase costs, n_total
    std::vector<double> lo, up;    // n_total
    std::vector<double> x;         // n_total
    std::vector<VarState> state;   // n_total
    std::vector<std::size_t> basis;  // m, variable index per row

    double col(std::size_t row, std::size_t j) const {
        if (j < prob->cols) return prob->a(row, j);
        return j - prob->cols == row ? art_sign[row] : 0.0;
    }

    // Recompute basic values from the nonbasic bounds; keeps drift out of
    // long pivot sequences.
    void refresh_basics(const Lu& lu) {
        std::vector<double> r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = prob->rhs[i];
        for (std::size_t j = 0; j < n_total; ++j) {
            if (state[j] == VarState::basic) continue;
            const double v = (state[j] == VarState::at_lower) ? lo[j] : up[j];
            x[j] = v;
            if (v != 0.0)
                for (std::size_t i = 0; i < m; ++i) r[i] -= col(i, j) * v;
        }
        std::vector<double> xb;
        lu.solve(r, xb);
        for (std::size_t i = 0; i < m; ++i) x[basis[i]] = xb[i];
    }
};

bool factor_basis(Tableau& t, Lu& lu) {
    std::vector<double> bmat(t.m * t.m);
    for (std::size_t i = 0; i < t.m; ++i)
        for (std::size_t k = 0; k < t.m; ++k) bmat[i * t.m + k] = t.col(i, t.basis[k]);
    lu.factor(bmat, t.m);
    return !lu.singular;
}

// One simplex phase on the current cost vector. Returns false on iteration
// trouble (singular basis / limit), true when optimal.
bool run_phase(Tableau& t, long& iter_budget) {
    const std::size_t m = t.m;
    int degenerate_run = 0;
    bool bland = false;

    while (iter_budget-- > 0) {
        Lu lu;
        if (!factor_basis(t, lu)) return false;
        t.refresh_basics(lu);

        // duals and reduced costs
        std::vector<double> cb(m);
        for (std::size_t i = 0; i < m; ++i) cb[i] = t.cost[t.basis[i]];
        std::vector<double> y;
        lu.solve_transposed(cb, y);

        std::size_t enter = SIZE_MAX;
        int dir = 0;
        double best_viol = kDualTol;
        for (std::size_t j = 0; j < t.n_total; ++j) {
            if (t.state[j] == VarState::basic) continue;
            if (t.lo[j] == t.up[j]) continue;  // fixed
            double d = t.cost[j];
            for (std::size_t i = 0; i < m; ++i) {
                const double a = t.col(i, j);
                if (a != 0.0) d -= y[i] * a;
            }
            double viol = 0.0;
            int cand_dir = 0;
            if (t.state[j] == VarState::at_lower && d < -kDualTol) {
                viol = -d;
                cand_dir = +1;
            } else if (t.state[j] == VarState::at_upper && d > kDualTol) {
                viol = d;
                cand_dir = -1;
            } else {
                continue;
            }
            if (bland) {
                enter = j;
                dir = cand_dir;
                break;
            }
            if (viol > best_viol) {
                best_viol = viol;
                enter = j;
                dir = cand_dir;
            }
        }
        if (enter == SIZE_MAX) return true;  // optimal for this phase

        // direction of basic variables: dx_B = -dir * B^-1 a_enter per unit step
        std::vector<double> aj(m);
        for (std::size_t i = 0; i < m; ++i) aj[i] = t.col(i, enter);
        std::vector<double> w;
        lu.solve(aj, w);

        double t_max = t.up[enter] - t.lo[enter];  // bound-to-bound flip
        std::size_t leave_row = SIZE_MAX;
        double leave_target = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double rate = -dir * w[i];
            const std::size_t k = t.basis[i];
            double limit, target;
            if (rate > kPrimalTol) {
                if (t.up[k] == kInf) continue;
                limit = (t.up[k] - t.x[k]) / rate;
                target = t.up[k];
            } else if (rate < -kPrimalTol) {
                if (t.lo[k] == -kInf) continue;
                limit = (t.lo[k] - t.x[k]) / rate;
                target = t.lo[k];
            } else {
                continue;
            }
            if (limit < 0.0) limit = 0.0;
            const bool strictly_better = limit < t_max - 1e-12;
            const bool tie_smaller_index =
                !strictly_better && limit <= t_max + 1e-12 &&
                (leave_row == SIZE_MAX ? limit <= t_max
                                       : t.basis[i] < t.basis[leave_row]);
            if (strictly_better || tie_smaller_index) {
                t_max = std::min(t_max, limit);
                leave_row = i;
                leave_target = target;
            }
        }

        if (t_max >= 1e29) return false;  // unbounded; cannot happen with finite boxes

        degenerate_run = (t_max < 1e-10) ? degenerate_run + 1 : 0;
        if (degenerate_run > kDegenerateRunBeforeBland) bland = true;

        const double step = dir * t_max;
        if (leave_row == SIZE_MAX) {
            // bound flip, basis unchanged
            t.x[enter] += step;
            t.state[enter] =
                (t.state[enter] == VarState::at_lower) ? VarState::at_upper
                                                       : VarState::at_lower;
        } else {
            for (std::size_t i = 0; i < m; ++i) t.x[t.basis[i]] -= dir * w[i] * t_max;
            t.x[enter] += step;
            const std::size_t out = t.basis[leave_row];
            t.x[out] = leave_target;  // snap exactly onto the bound it hit
            t.state[out] = (leave_target == t.lo[out]) ? VarState::at_lower
                                                       : VarState::at_upper;
            t.basis[leave_row] = enter;
            t.state[enter] = VarState::basic;
        }
    }
    return false;
}

}  // namespace

Solution solve(const Problem& p) {
    assert(p.obj.size() == p.cols && p.rhs.size() == p.rows);
    Solution sol;
    if (p.rows == 0) {
        // pure box problem: each variable sits at whichever bound is cheaper
        sol.status = Status::optimal;
        sol.x.resize(p.cols);
        for (std::size_t j = 0; j < p.cols; ++j)
            sol.x[j] = p.obj[j] >= 0 ? p.lower[j] : p.upper[j];
        for (std::size_t j = 0; j < p.cols; ++j) sol.objective += p.obj[j] * sol.x[j];
        return sol;
    }

    Tableau t;
    t.m = p.rows;
    t.n_total = p.cols + p.rows;
    t.prob = &p;
    t.art_sign.assign(p.rows, 1.0);
    t.lo = p.lower;
    t.up = p.upper;
    t.lo.resize(t.n_total, 0.0);
    t.up.resize(t.n_total, kInf);
    t.x.assign(t.n_total, 0.0);
    t.state.assign(t.n_total, VarState::at_lower);

    // start: structurals at lower bound, one artificial basic per row
    std::vector<double> resid(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) {
        double r = p.rhs[i];
        for (std::size_t j = 0; j < p.cols; ++j) r -= p.a(i, j) * p.lower[j];
        resid[i] = r;
    }
    t.basis.resize(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) {
        t.art_sign[i] = (resid[i] >= 0) ? 1.0 : -1.0;
        const std::size_t aidx = p.cols + i;
        t.basis[i] = aidx;
        t.state[aidx] = VarState::basic;
        t.x[aidx] = std::fabs(resid[i]);
    }
    for (std::size_t j = 0; j < p.cols; ++j) t.x[j] = p.lower[j];

    // phase 1: drive artificials to zero
    t.cost.assign(t.n_total, 0.0);
    for (std::size_t i = 0; i < p.rows; ++i) t.cost[p.cols + i] = 1.0;
    long budget = kMaxIterations;
    if (!run_phase(t, budget)) {
        sol.status = Status::iteration_limit;
        return sol;
    }
    double art_sum = 0.0;
    for (std::size_t i = 0; i < p.rows; ++i) art_sum += t.x[p.cols + i];
    if (art_sum > 1e-7) {
        sol.status = Status::infeasible;
        return sol;
    }

    // phase 2: pin artificials at zero, restore the real objective
    for (std::size_t i = 0; i < p.rows; ++i) {
        t.lo[p.cols + i] = 0.0;
        t.up[p.cols + i] = 0.0;
    }
    t.cost.assign(t.n_total, 0.0);
    for (std::size_t j = 0; j < p.cols; ++j) t.cost[j] = p.obj[j];
    if (!run_phase(t, budget)) {
        sol.status = Status::iteration_limit;
        return sol;
    }

    sol.status = Status::optimal;
    sol.x.assign(t.x.begin(), t.x.begin() + static_cast<long>(p.cols));
    sol.objective = 0.0;
    for (std::size_t j = 0; j < p.cols; ++j) sol.objective += p.obj[j] * sol.x[j];
    return sol;
}

}  // namespace csched::lp
