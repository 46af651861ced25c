#pragma once

#include <limits>
#include <vector>

namespace frontier {

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEq;
    double rhs = 0.0;
};

// Dense linear program: maximize objective.x subject to row constraints and
// per-variable bounds. Upper bounds may be +infinity.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;

    static constexpr double kInfinity = std::numeric_limits<double>::infinity();
};

struct SolverConfig {
    double epsilon = 1e-5;         // non-Archimedean lower bound on DEA weights
    double feasibility_tol = 1e-9;
    double pivot_tol = 1e-10;
    int max_pivots = 20000;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;  // populated only when Optimal
    double objective = 0.0;
    int pivots = 0;
};

// Bounded-variable primal simplex on a dense tableau, two phases.
// Deterministic for identical inputs; Bland's rule engages after a stall
// threshold so degenerate cycles terminate.
LpSolution solve_lp(const LinearProgram& lp, const SolverConfig& config = {});

}  // namespace frontier
