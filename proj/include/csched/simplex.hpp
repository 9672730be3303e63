#pragma once

#include <cstddef>
#include <vector>

namespace csched::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

// min obj.x  subject to  mat.x = rhs,  lower <= x <= upper.
// All bounds must be finite (the scheduler's problems are boxes plus
// prefix-sum range constraints, so this always holds).
struct Problem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> obj;
    std::vector<double> mat;  // row-major, rows*cols
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    double& a(std::size_t i, std::size_t j) { return mat[i * cols + j]; }
    double a(std::size_t i, std::size_t j) const { return mat[i * cols + j]; }
};

struct Solution {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

// Dense two-phase primal simplex with bounded variables. Dantzig pricing
// with a switch to Bland's rule after a run of degenerate pivots, so it
// terminates on every input. Deterministic: fixed scan order, no RNG.
Solution solve(const Problem& p);

}  // namespace csched::lp
