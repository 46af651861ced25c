#include "frontier/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : unsigned char { Basic, AtLower, AtUpper, Free };

// Working copy of the program in computational form. Column layout:
// [structural | slack/surplus (one per inequality) | artificial (one per row)].
struct Simplex {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t art_begin = 0;  // first artificial column
    std::vector<double> tab;    // rows x cols, row-major; B^{-1} A throughout
    std::vector<double> lower, upper;
    std::vector<double> x;          // current value of every column
    std::vector<VarState> state;    // per column
    std::vector<std::size_t> basis; // row -> basic column
    const SolverConfig* cfg = nullptr;
    int pivots = 0;
    bool bland = false;
    int stall = 0;
    int stall_limit = 0;

    double& at(std::size_t i, std::size_t j) { return tab[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return tab[i * cols + j]; }
};

void validate(const LinearProgram& lp) {
    const std::size_t n = lp.objective.size();
    if (n == 0) throw DimensionMismatch("linear program has no variables");
    if (lp.lower.size() != n || lp.upper.size() != n)
        throw DimensionMismatch("bound vectors do not match variable count");
    for (const auto& row : lp.constraints)
        if (row.coeffs.size() != n)
            throw DimensionMismatch("constraint row length does not match variable count");
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : lp.objective)
        if (!finite(v)) throw NumericalBreakdown("non-finite objective coefficient");
    for (const auto& row : lp.constraints) {
        if (!finite(row.rhs)) throw NumericalBreakdown("non-finite right-hand side");
        for (double v : row.coeffs)
            if (!finite(v)) throw NumericalBreakdown("non-finite constraint coefficient");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] == kInf ||
            lp.upper[j] == -kInf)
            throw NumericalBreakdown("malformed variable bound");
    }
}

// Reduced costs z_j = c_j - y.column_j with y_i = c_basis(i).
void reduced_costs(const Simplex& s, const std::vector<double>& cost, std::vector<double>& z) {
    const std::size_t m = s.rows, n = s.cols;
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = cost[s.basis[i]];
    z.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) z[j] = cost[j];
    for (std::size_t i = 0; i < m; ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        const double* row = &s.tab[i * n];
        for (std::size_t j = 0; j < n; ++j) z[j] -= yi * row[j];
    }
}

// One simplex phase over the given cost vector. Returns false on unboundedness.
bool run_phase(Simplex& s, const std::vector<double>& cost) {
    const double rc_tol = s.cfg->feasibility_tol;
    const double piv_tol = s.cfg->pivot_tol;
    std::vector<double> z;
    while (true) {
        if (s.pivots >= s.cfg->max_pivots)
            throw NumericalBreakdown("pivot limit exceeded after " +
                                     std::to_string(s.pivots) + " iterations");
        reduced_costs(s, cost, z);

        // Entering column: improving direction for a maximization.
        std::size_t enter = s.cols;
        int dir = 0;
        double best = rc_tol;
        for (std::size_t j = 0; j < s.cols; ++j) {
            if (s.state[j] == VarState::Basic) continue;
            if (s.lower[j] == s.upper[j]) continue;  // fixed, never moves
            const double zj = z[j];
            int d = 0;
            if ((s.state[j] == VarState::AtLower || s.state[j] == VarState::Free) && zj > rc_tol)
                d = +1;
            else if ((s.state[j] == VarState::AtUpper || s.state[j] == VarState::Free) &&
                     zj < -rc_tol)
                d = -1;
            if (d == 0) continue;
            if (s.bland) { enter = j; dir = d; break; }
            if (std::fabs(zj) > best) { best = std::fabs(zj); enter = j; dir = d; }
        }
        if (enter == s.cols) return true;  // optimal for this phase

        // Ratio test: step t moves x[enter] by dir*t, basic i by -dir*tab(i,enter)*t.
        double t_max = kInf;
        if (dir > 0 && s.upper[enter] < kInf) t_max = s.upper[enter] - s.x[enter];
        if (dir < 0 && s.lower[enter] > -kInf) t_max = s.x[enter] - s.lower[enter];
        std::size_t leave_row = s.rows;  // rows == "entering hits its own bound"
        double t_best = t_max;
        double best_piv = 0.0;
        for (std::size_t i = 0; i < s.rows; ++i) {
            const double a = s.at(i, enter);
            const double delta = -dir * a;  // rate of change of basic i
            if (std::fabs(delta) <= piv_tol) continue;
            const std::size_t bi = s.basis[i];
            double ti;
            if (delta > 0.0) {
                if (s.upper[bi] == kInf) continue;
                ti = (s.upper[bi] - s.x[bi]) / delta;
            } else {
                if (s.lower[bi] == -kInf) continue;
                ti = (s.x[bi] - s.lower[bi]) / (-delta);
            }
            if (ti < 0.0) ti = 0.0;  // roundoff guard
            const bool better =
                ti < t_best - 1e-12 ||
                (ti <= t_best + 1e-12 && leave_row != s.rows &&
                 (s.bland ? s.basis[i] < s.basis[leave_row] : std::fabs(a) > best_piv)) ||
                (ti <= t_best + 1e-12 && leave_row == s.rows && ti <= t_best);
            if (better) {
                t_best = std::min(ti, t_best);
                leave_row = i;
                best_piv = std::fabs(a);
            }
        }
        if (t_best == kInf) return false;  // unbounded direction

        ++s.pivots;
        if (t_best > piv_tol) s.stall = 0; else if (++s.stall > s.stall_limit) s.bland = true;

        // Move along the direction.
        s.x[enter] += dir * t_best;
        for (std::size_t i = 0; i < s.rows; ++i) {
            const double a = s.at(i, enter);
            if (a != 0.0) s.x[s.basis[i]] += -dir * a * t_best;
        }

        if (leave_row == s.rows) {
            // Bound flip: entering moved across to its other bound.
            s.state[enter] = (dir > 0) ? VarState::AtUpper : VarState::AtLower;
            continue;
        }

        // Basis change: entering takes leave_row, the old basic lands on the
        // bound it hit (pinned exactly to kill accumulated drift).
        const std::size_t leave = s.basis[leave_row];
        const double a_leave = s.at(leave_row, enter);
        const double delta = -dir * a_leave;
        if (delta > 0.0) { s.x[leave] = s.upper[leave]; s.state[leave] = VarState::AtUpper; }
        else             { s.x[leave] = s.lower[leave]; s.state[leave] = VarState::AtLower; }

        const double piv = a_leave;
        if (std::fabs(piv) <= piv_tol)
            throw NumericalBreakdown("degenerate pivot element");
        double* prow = &s.tab[leave_row * s.cols];
        const double inv = 1.0 / piv;
        for (std::size_t j = 0; j < s.cols; ++j) prow[j] *= inv;
        prow[enter] = 1.0;  // exact
        for (std::size_t i = 0; i < s.rows; ++i) {
            if (i == leave_row) continue;
            double* row = &s.tab[i * s.cols];
            const double f = row[enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < s.cols; ++j) row[j] -= f * prow[j];
            row[enter] = 0.0;  // exact
        }
        s.basis[leave_row] = enter;
        s.state[enter] = VarState::Basic;
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverConfig& config) {
    validate(lp);
    const std::size_t n_struct = lp.objective.size();
    const std::size_t m = lp.constraints.size();

    // Inconsistent box bounds make the program trivially infeasible.
    for (std::size_t j = 0; j < n_struct; ++j)
        if (lp.lower[j] > lp.upper[j]) return {LpStatus::Infeasible, {}, 0.0, 0};

    std::size_t n_slack = 0;
    for (const auto& row : lp.constraints)
        if (row.relation != Relation::Equal) ++n_slack;

    Simplex s;
    s.rows = m;
    s.art_begin = n_struct + n_slack;
    s.cols = s.art_begin + m;
    s.cfg = &config;
    s.stall_limit = 50 + 10 * static_cast<int>(m + s.cols);
    s.tab.assign(s.rows * s.cols, 0.0);
    s.lower.assign(s.cols, 0.0);
    s.upper.assign(s.cols, kInf);
    s.x.assign(s.cols, 0.0);
    s.state.assign(s.cols, VarState::AtLower);
    s.basis.assign(s.rows, 0);

    for (std::size_t j = 0; j < n_struct; ++j) {
        s.lower[j] = lp.lower[j];
        s.upper[j] = lp.upper[j];
        if (lp.lower[j] > -kInf) { s.x[j] = lp.lower[j]; s.state[j] = VarState::AtLower; }
        else if (lp.upper[j] < kInf) { s.x[j] = lp.upper[j]; s.state[j] = VarState::AtUpper; }
        else { s.x[j] = 0.0; s.state[j] = VarState::Free; }
    }

    std::vector<double> rhs(m);
    std::vector<std::size_t> slack_of(m, s.cols);
    std::size_t slack = n_struct;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.constraints[i];
        for (std::size_t j = 0; j < n_struct; ++j) s.at(i, j) = row.coeffs[j];
        rhs[i] = row.rhs;
        if (row.relation == Relation::LessEq) { slack_of[i] = slack; s.at(i, slack++) = 1.0; }
        else if (row.relation == Relation::GreaterEq) { slack_of[i] = slack; s.at(i, slack++) = -1.0; }
    }

    // Each row gets either its own slack as the initial basic column (when the
    // residual already has the right sign) or an artificial carrying the
    // residual, so the identity basis is feasible for phase 1.
    double b_scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) b_scale = std::max(b_scale, std::fabs(rhs[i]));
    for (std::size_t i = 0; i < m; ++i) {
        double r = rhs[i];
        for (std::size_t j = 0; j < s.art_begin; ++j) r -= s.at(i, j) * s.x[j];
        const std::size_t aj = s.art_begin + i;
        const auto& row = lp.constraints[i];
        if (row.relation == Relation::LessEq && r >= 0.0 && slack_of[i] < s.cols) {
            s.basis[i] = slack_of[i];
            s.x[slack_of[i]] = r;
            s.state[slack_of[i]] = VarState::Basic;
            s.upper[aj] = 0.0;  // artificial never needed for this row
            continue;
        }
        if (row.relation == Relation::GreaterEq && r <= 0.0 && slack_of[i] < s.cols) {
            for (std::size_t j = 0; j < s.cols; ++j) s.at(i, j) = -s.at(i, j);
            s.basis[i] = slack_of[i];
            s.x[slack_of[i]] = -r;
            s.state[slack_of[i]] = VarState::Basic;
            s.upper[aj] = 0.0;
            continue;
        }
        const double sign = (r < 0.0) ? -1.0 : 1.0;
        s.at(i, aj) = sign;
        s.x[aj] = std::fabs(r);
        s.state[aj] = VarState::Basic;
        s.basis[i] = aj;
        if (sign < 0.0)
            for (std::size_t j = 0; j < s.cols; ++j) s.at(i, j) = -s.at(i, j);
        // Row is now B^{-1} scaled so the artificial column is exactly +1.
        s.at(i, aj) = 1.0;
    }

    std::vector<double> phase1(s.cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1[s.art_begin + i] = -1.0;
    if (!run_phase(s, phase1))
        throw NumericalBreakdown("phase one reported an unbounded direction");

    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) infeas += s.x[s.art_begin + i];
    if (infeas > config.feasibility_tol * (1.0 + b_scale) * static_cast<double>(m ? m : 1))
        return {LpStatus::Infeasible, {}, 0.0, s.pivots};

    // Phase 2: artificials pinned at zero, real objective takes over.
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t aj = s.art_begin + i;
        s.upper[aj] = 0.0;
        s.x[aj] = 0.0;
        if (s.state[aj] != VarState::Basic) s.state[aj] = VarState::AtLower;
    }
    s.bland = false;
    s.stall = 0;
    std::vector<double> phase2(s.cols, 0.0);
    for (std::size_t j = 0; j < n_struct; ++j) phase2[j] = lp.objective[j];
    if (!run_phase(s, phase2)) return {LpStatus::Unbounded, {}, 0.0, s.pivots};

    // Extract, clamp roundoff into the box, and re-verify against the
    // original data; drift past tolerance is a solver failure, not an answer.
    std::vector<double> x(n_struct);
    for (std::size_t j = 0; j < n_struct; ++j) {
        double v = s.x[j];
        v = std::min(std::max(v, lp.lower[j]), lp.upper[j]);
        x[j] = v;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.constraints[i];
        double lhs = 0.0, mag = std::fabs(row.rhs);
        for (std::size_t j = 0; j < n_struct; ++j) {
            lhs += row.coeffs[j] * x[j];
            mag += std::fabs(row.coeffs[j] * x[j]);
        }
        const double tol = config.feasibility_tol * (1.0 + mag) * 10.0;
        const double resid = lhs - row.rhs;
        const bool ok = (row.relation == Relation::LessEq && resid <= tol) ||
                        (row.relation == Relation::GreaterEq && resid >= -tol) ||
                        (row.relation == Relation::Equal && std::fabs(resid) <= tol);
        if (!ok)
            throw NumericalBreakdown("solution drifted off constraint " + std::to_string(i));
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < n_struct; ++j) obj += lp.objective[j] * x[j];
    if (!std::isfinite(obj)) throw NumericalBreakdown("non-finite objective value");
    return {LpStatus::Optimal, std::move(x), obj, s.pivots};
}

}  // namespace frontier
