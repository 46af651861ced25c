#include "frontier/madea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "frontier/errors.hpp"
#include "frontier/linprog.hpp"

namespace frontier {

namespace {

constexpr double kEfficientBand = 1e-6;  // activity counts as efficient at >= 1 - band
// Acceptable relative constraint overshoot for points produced by the exact
// u-refit: binding rows re-evaluate to roundoff-scale residuals of either
// sign, well inside the 1e-9 post-hoc budget.
constexpr double kFeasSlack = 1e-11;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct Boxes {
    double llo, lhi, blo, bhi;
};

Boxes effective_boxes(const ActivityStructure& structure, const ScenarioSpec& scenario) {
    Boxes b{scenario.lambda_lo, scenario.lambda_hi, scenario.beta_lo, scenario.beta_hi};
    if (structure.lambda_bounds) { b.llo = (*structure.lambda_bounds)[0]; b.lhi = (*structure.lambda_bounds)[1]; }
    if (structure.beta_bounds) { b.blo = (*structure.beta_bounds)[0]; b.bhi = (*structure.beta_bounds)[1]; }
    auto valid = [](double lo, double hi) { return 0.0 < lo && lo <= hi && hi < 1.0; };
    if (!valid(b.llo, b.lhi) || !valid(b.blo, b.bhi))
        throw ConfigError("split-share box must satisfy 0 < lo <= hi < 1");
    return b;
}

// Output category per dataset output index.
enum : int { kTeach = 0, kResearch = 1, kSplit = 2 };

struct Wiring {
    std::vector<int> category;           // per output index
    std::vector<std::size_t> split_pos;  // per output index, valid when kSplit
};

Wiring make_wiring(const ActivityStructure& structure, std::size_t n) {
    Wiring w;
    w.category.assign(n, -1);
    w.split_pos.assign(n, 0);
    for (std::size_t i : structure.teaching_outputs) w.category[i] = kTeach;
    for (std::size_t i : structure.research_outputs) w.category[i] = kResearch;
    for (std::size_t r = 0; r < structure.split_outputs.size(); ++r) {
        w.category[structure.split_outputs[r]] = kSplit;
        w.split_pos[structure.split_outputs[r]] = r;
    }
    return w;
}

// Search state for one DMU: lambda per input, beta per split output, the
// input-weight simplex point w (w_j = v_j * x_jk, sum 1), and output weights
// u. Aggregates per DMU s are kept incrementally consistent.
struct Evaluator {
    const Dataset* data = nullptr;
    const Wiring* wiring = nullptr;
    std::size_t k = 0, m = 0, n = 0, S = 0, p = 0;
    AlphaMode mode = AlphaMode::FixedAlpha;
    double fixed_alpha = 0.5;
    double eps = 1e-5;
    Boxes box{};
    std::vector<double> floor_w;  // eps * x_jk
    std::vector<double> cap_u;

    std::vector<double> lambda;  // size m, by input index
    std::vector<double> beta;    // size p, by split position
    std::vector<double> w;       // size m, simplex
    std::vector<double> u;       // size n

    std::vector<double> VX, XT, QT, QR;  // size S
    int moves_since_refresh = 0;

    double x(std::size_t s, std::size_t j) const { return data->record(s).inputs[j]; }
    double q(std::size_t s, std::size_t i) const { return data->record(s).outputs[i]; }
    double v(std::size_t j) const { return w[j] / x(k, j); }

    void recompute() {
        VX.assign(S, 0.0);
        XT.assign(S, 0.0);
        QT.assign(S, 0.0);
        QR.assign(S, 0.0);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t j = 0; j < m; ++j) {
                const double vx = v(j) * x(s, j);
                VX[s] += vx;
                XT[s] += lambda[j] * vx;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double uq = u[i] * q(s, i);
                switch (wiring->category[i]) {
                    case kTeach: QT[s] += uq; break;
                    case kResearch: QR[s] += uq; break;
                    default: {
                        const double b = beta[wiring->split_pos[i]];
                        QT[s] += b * uq;
                        QR[s] += (1.0 - b) * uq;
                    }
                }
            }
        }
        moves_since_refresh = 0;
    }

    void maybe_refresh() {
        if (++moves_since_refresh >= 256) recompute();
    }

    void shift_lambda(std::size_t j, double delta) {
        lambda[j] += delta;
        for (std::size_t s = 0; s < S; ++s) XT[s] += delta * v(j) * x(s, j);
        maybe_refresh();
    }
    void shift_beta(std::size_t r, double delta) {
        beta[r] += delta;
        std::size_t i = 0;
        for (std::size_t c = 0; c < n; ++c)
            if (wiring->category[c] == kSplit && wiring->split_pos[c] == r) { i = c; break; }
        for (std::size_t s = 0; s < S; ++s) {
            const double uq = u[i] * q(s, i);
            QT[s] += delta * uq;
            QR[s] -= delta * uq;
        }
        maybe_refresh();
    }
    void shift_u(std::size_t i, double delta) {
        u[i] += delta;
        for (std::size_t s = 0; s < S; ++s) {
            const double dq = delta * q(s, i);
            switch (wiring->category[i]) {
                case kTeach: QT[s] += dq; break;
                case kResearch: QR[s] += dq; break;
                default: {
                    const double b = beta[wiring->split_pos[i]];
                    QT[s] += b * dq;
                    QR[s] += (1.0 - b) * dq;
                }
            }
        }
        maybe_refresh();
    }
    // Transfer t of simplex mass from w[l] to w[j].
    void shift_w(std::size_t j, std::size_t l, double t) {
        w[j] += t;
        w[l] -= t;
        const double dvj = t / x(k, j), dvl = -t / x(k, l);
        for (std::size_t s = 0; s < S; ++s) {
            const double a = dvj * x(s, j), b = dvl * x(s, l);
            VX[s] += a + b;
            XT[s] += lambda[j] * a + lambda[l] * b;
        }
        maybe_refresh();
    }

    double objective() const {
        const double xt = XT[k], xr = VX[k] - XT[k];
        if (mode == AlphaMode::FixedAlpha)
            return fixed_alpha * QT[k] / xt + (1.0 - fixed_alpha) * QR[k] / xr;
        // Endogenous: alpha_T = xt / VX, so the weighted ratios collapse to
        // (QT + QR) / VX; with the simplex normalization VX[k] == 1.
        return (QT[k] + QR[k]) / VX[k];
    }

    double max_violation() const {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < S; ++s) {
            const double scale = VX[s];
            worst = std::max(worst, (QT[s] - XT[s]) / scale);
            worst = std::max(worst, (QR[s] - (VX[s] - XT[s])) / scale);
        }
        return worst;
    }

    double penalized(double P) const {
        double pen = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            const double scale = VX[s];
            const double a = std::max(0.0, (QT[s] - XT[s]) / scale);
            const double b = std::max(0.0, (QR[s] - (VX[s] - XT[s])) / scale);
            pen += a * a + b * b;
        }
        return objective() - P * pen;
    }
};

// Exact maximization over u at fixed (lambda, beta, w): the objective and the
// activity constraints are linear in u, so this is a plain LP. Returns false
// when the LP has no optimum (epsilon floor conflicts).
bool refit_u(Evaluator& ev, const SolverConfig& lp_cfg) {
    LinearProgram lp;
    lp.objective.assign(ev.n, 0.0);
    const double xt = ev.XT[ev.k], xr = ev.VX[ev.k] - ev.XT[ev.k];
    for (std::size_t i = 0; i < ev.n; ++i) {
        const double qk = ev.q(ev.k, i);
        switch (ev.wiring->category[i]) {
            case kTeach:
                lp.objective[i] = (ev.mode == AlphaMode::FixedAlpha)
                                      ? ev.fixed_alpha * qk / xt
                                      : qk / ev.VX[ev.k];
                break;
            case kResearch:
                lp.objective[i] = (ev.mode == AlphaMode::FixedAlpha)
                                      ? (1.0 - ev.fixed_alpha) * qk / xr
                                      : qk / ev.VX[ev.k];
                break;
            default: {
                const double b = ev.beta[ev.wiring->split_pos[i]];
                lp.objective[i] = (ev.mode == AlphaMode::FixedAlpha)
                                      ? ev.fixed_alpha * b * qk / xt +
                                            (1.0 - ev.fixed_alpha) * (1.0 - b) * qk / xr
                                      : qk / ev.VX[ev.k];
            }
        }
    }
    lp.lower.assign(ev.n, ev.eps);
    lp.upper.assign(ev.n, LinearProgram::kInfinity);
    for (std::size_t s = 0; s < ev.S; ++s) {
        LinearConstraint teach, research;
        teach.coeffs.assign(ev.n, 0.0);
        research.coeffs.assign(ev.n, 0.0);
        for (std::size_t i = 0; i < ev.n; ++i) {
            const double qs = ev.q(s, i);
            switch (ev.wiring->category[i]) {
                case kTeach: teach.coeffs[i] = qs; break;
                case kResearch: research.coeffs[i] = qs; break;
                default: {
                    const double b = ev.beta[ev.wiring->split_pos[i]];
                    teach.coeffs[i] = b * qs;
                    research.coeffs[i] = (1.0 - b) * qs;
                }
            }
        }
        teach.relation = Relation::LessEq;
        teach.rhs = ev.XT[s];
        research.relation = Relation::LessEq;
        research.rhs = ev.VX[s] - ev.XT[s];
        lp.constraints.push_back(std::move(teach));
        lp.constraints.push_back(std::move(research));
    }
    LpSolution sol;
    try {
        sol = solve_lp(lp, lp_cfg);
    } catch (const SolverFailure&) {
        return false;
    }
    if (sol.status != LpStatus::Optimal) return false;
    ev.u = sol.x;
    ev.recompute();
    return true;
}

// One full coordinate sweep at relative step h; returns true if any move
// was accepted. When `hard` is set, only feasible improving moves pass and
// the true objective is scored; otherwise the penalized surrogate with
// weight P decides.
bool sweep(Evaluator& ev, double h, double P, bool hard) {
    bool improved = false;
    const double tiny = 1e-15;
    auto score = [&]() { return hard ? ev.objective() : ev.penalized(P); };
    auto feasible_ok = [&]() { return !hard || ev.max_violation() <= kFeasSlack; };

    for (std::size_t j = 0; j < ev.m; ++j) {
        const double width = ev.box.lhi - ev.box.llo;
        for (const double sgn : {+1.0, -1.0}) {
            const double cur = ev.lambda[j];
            const double target = std::clamp(cur + sgn * h * width, ev.box.llo, ev.box.lhi);
            const double delta = target - cur;
            if (delta == 0.0) continue;
            const double before = score();
            ev.shift_lambda(j, delta);
            if (score() > before + tiny && feasible_ok()) { improved = true; }
            else ev.shift_lambda(j, -delta);
        }
    }
    for (std::size_t r = 0; r < ev.p; ++r) {
        const double width = ev.box.bhi - ev.box.blo;
        for (const double sgn : {+1.0, -1.0}) {
            const double cur = ev.beta[r];
            const double target = std::clamp(cur + sgn * h * width, ev.box.blo, ev.box.bhi);
            const double delta = target - cur;
            if (delta == 0.0) continue;
            const double before = score();
            ev.shift_beta(r, delta);
            if (score() > before + tiny && feasible_ok()) { improved = true; }
            else ev.shift_beta(r, -delta);
        }
    }
    for (std::size_t j = 0; j < ev.m && ev.m > 1; ++j) {
        for (std::size_t l = 0; l < ev.m; ++l) {
            if (l == j) continue;
            const double t = std::min(h, ev.w[l] - ev.floor_w[l]);
            if (t <= 0.0) continue;
            const double before = score();
            ev.shift_w(j, l, t);
            if (score() > before + tiny && feasible_ok()) { improved = true; }
            else ev.shift_w(j, l, -t);
        }
    }
    for (std::size_t i = 0; i < ev.n; ++i) {
        const double width = ev.cap_u[i] - ev.eps;
        if (width <= 0.0) continue;
        for (const double sgn : {+1.0, -1.0}) {
            const double cur = ev.u[i];
            const double target = std::clamp(cur + sgn * h * width, ev.eps, ev.cap_u[i]);
            const double delta = target - cur;
            if (delta == 0.0) continue;
            const double before = score();
            ev.shift_u(i, delta);
            if (score() > before + tiny && feasible_ok()) { improved = true; }
            else ev.shift_u(i, -delta);
        }
    }
    return improved;
}

void descend(Evaluator& ev, double P, bool hard, double h0, int max_sweeps) {
    double h = h0;
    int sweeps = 0;
    while (h >= 1e-6 && sweeps < max_sweeps) {
        ++sweeps;
        if (!sweep(ev, h, P, hard)) h *= 0.5;
    }
    ev.recompute();
}

// Scale u toward the feasible region; returns whether the point ended feasible.
bool repair(Evaluator& ev) {
    for (int round = 0; round < 3; ++round) {
        if (ev.max_violation() <= 0.0) return true;
        double rho = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < ev.S; ++s) {
            if (ev.QT[s] > 0.0) rho = std::min(rho, ev.XT[s] / ev.QT[s]);
            if (ev.QR[s] > 0.0) rho = std::min(rho, (ev.VX[s] - ev.XT[s]) / ev.QR[s]);
        }
        if (!std::isfinite(rho)) return false;
        bool changed = false;
        for (std::size_t i = 0; i < ev.n; ++i) {
            const double target = std::max(ev.eps, ev.u[i] * rho * (1.0 - 1e-12));
            if (target != ev.u[i]) { ev.u[i] = target; changed = true; }
        }
        ev.recompute();
        if (!changed) return ev.max_violation() <= 0.0;
    }
    return ev.max_violation() <= 0.0;
}

struct Snapshot {
    std::vector<double> lambda, beta, w, u;
};

Snapshot save(const Evaluator& ev) { return {ev.lambda, ev.beta, ev.w, ev.u}; }

void restore(Evaluator& ev, const Snapshot& snap) {
    ev.lambda = snap.lambda;
    ev.beta = snap.beta;
    ev.w = snap.w;
    ev.u = snap.u;
    ev.recompute();
}

// Final sweep over the outer coordinates with u refit exactly per candidate.
void polish_outer(Evaluator& ev, const SolverConfig& lp_cfg) {
    double best = ev.objective();
    Snapshot best_snap = save(ev);
    for (const double h : {0.1, 0.03, 0.01, 0.003, 0.001, 3e-4, 1e-4}) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 8) {
            improved = false;
            auto try_candidate = [&](auto&& mutate) {
                Snapshot cur = save(ev);
                mutate();
                if (refit_u(ev, lp_cfg) && ev.max_violation() <= kFeasSlack &&
                    ev.objective() > best + 1e-13) {
                    best = ev.objective();
                    best_snap = save(ev);
                    improved = true;
                } else {
                    restore(ev, cur);
                }
            };
            for (std::size_t j = 0; j < ev.m; ++j) {
                const double width = ev.box.lhi - ev.box.llo;
                for (const double sgn : {+1.0, -1.0}) {
                    const double target =
                        std::clamp(ev.lambda[j] + sgn * h * width, ev.box.llo, ev.box.lhi);
                    const double delta = target - ev.lambda[j];
                    if (delta != 0.0)
                        try_candidate([&] { ev.shift_lambda(j, delta); });
                }
            }
            for (std::size_t r = 0; r < ev.p; ++r) {
                const double width = ev.box.bhi - ev.box.blo;
                for (const double sgn : {+1.0, -1.0}) {
                    const double target =
                        std::clamp(ev.beta[r] + sgn * h * width, ev.box.blo, ev.box.bhi);
                    const double delta = target - ev.beta[r];
                    if (delta != 0.0)
                        try_candidate([&] { ev.shift_beta(r, delta); });
                }
            }
            for (std::size_t j = 0; j < ev.m && ev.m > 1; ++j)
                for (std::size_t l = 0; l < ev.m; ++l) {
                    if (l == j) continue;
                    const double t = std::min(h, ev.w[l] - ev.floor_w[l]);
                    if (t > 0.0)
                        try_candidate([&] { ev.shift_w(j, l, t); });
                }
        }
    }
    restore(ev, best_snap);
}

MadeaResult assemble(const Evaluator& ev, const ActivityStructure& structure,
                     const ScenarioSpec& scenario) {
    MadeaResult out;
    out.id = ev.data->record(ev.k).id;
    const double xt = ev.XT[ev.k], xr = ev.VX[ev.k] - ev.XT[ev.k];
    out.teaching = ev.QT[ev.k] / xt;
    out.research = ev.QR[ev.k] / xr;
    out.alpha_teaching = (scenario.kind == AlphaMode::FixedAlpha)
                             ? scenario.fixed_alpha
                             : xt / ev.VX[ev.k];
    out.alpha_research = 1.0 - out.alpha_teaching;
    out.total = out.alpha_teaching * out.teaching + out.alpha_research * out.research;
    out.lambdas.reserve(structure.shared_inputs.size());
    for (std::size_t j : structure.shared_inputs) out.lambdas.push_back(ev.lambda[j]);
    out.betas = ev.beta;
    out.input_weights.resize(ev.m);
    for (std::size_t j = 0; j < ev.m; ++j) out.input_weights[j] = ev.v(j);
    out.output_weights = ev.u;
    return out;
}

}  // namespace

void ActivityStructure::check(std::size_t num_inputs, std::size_t num_outputs) const {
    std::vector<int> in_seen(num_inputs, 0), out_seen(num_outputs, 0);
    for (std::size_t j : shared_inputs) {
        if (j >= num_inputs) throw DimensionMismatch("shared input index out of range");
        ++in_seen[j];
    }
    for (std::size_t j = 0; j < num_inputs; ++j)
        if (in_seen[j] != 1)
            throw DimensionMismatch("input " + std::to_string(j) +
                                    " must appear exactly once among shared inputs");
    auto mark = [&](const std::vector<std::size_t>& list, const char* what) {
        for (std::size_t i : list) {
            if (i >= num_outputs)
                throw DimensionMismatch(std::string(what) + " output index out of range");
            ++out_seen[i];
        }
    };
    mark(teaching_outputs, "teaching");
    mark(research_outputs, "research");
    mark(split_outputs, "split");
    for (std::size_t i = 0; i < num_outputs; ++i)
        if (out_seen[i] != 1)
            throw DimensionMismatch("output " + std::to_string(i) +
                                    " must appear in exactly one activity category");
    auto valid = [](const std::optional<std::array<double, 2>>& b) {
        return !b || (0.0 < (*b)[0] && (*b)[0] <= (*b)[1] && (*b)[1] < 1.0);
    };
    if (!valid(lambda_bounds) || !valid(beta_bounds))
        throw ConfigError("split-share box must satisfy 0 < lo <= hi < 1");
}

ScenarioSpec ScenarioSpec::scenario1() {
    ScenarioSpec s;
    s.kind = AlphaMode::FixedAlpha;
    s.fixed_alpha = 0.5;
    s.lambda_lo = s.beta_lo = 0.01;
    s.lambda_hi = s.beta_hi = 0.99;
    return s;
}

ScenarioSpec ScenarioSpec::scenario2() {
    ScenarioSpec s;
    s.kind = AlphaMode::EndogenousAlpha;
    s.lambda_lo = s.beta_lo = 0.30;
    s.lambda_hi = s.beta_hi = 0.90;
    return s;
}

MadeaResult madea_score(const Dataset& data, const ActivityStructure& structure,
                        const ScenarioSpec& scenario, std::size_t k,
                        const MadeaSearchConfig& search) {
    structure.check(data.num_inputs(), data.num_outputs());
    if (k >= data.size()) throw DimensionMismatch("DMU index out of range");
    if (!(scenario.fixed_alpha >= 0.0 && scenario.fixed_alpha <= 1.0))
        throw ConfigError("fixed alpha must lie in [0, 1]");
    if (search.num_starts < 1) throw ConfigError("num_starts must be positive");

    const Boxes box = effective_boxes(structure, scenario);
    const Wiring wiring = make_wiring(structure, data.num_outputs());

    Evaluator ev;
    ev.data = &data;
    ev.wiring = &wiring;
    ev.k = k;
    ev.m = data.num_inputs();
    ev.n = data.num_outputs();
    ev.S = data.size();
    ev.p = structure.split_outputs.size();
    ev.mode = scenario.kind;
    ev.fixed_alpha = scenario.fixed_alpha;
    ev.eps = scenario.epsilon;
    ev.box = box;

    ev.floor_w.resize(ev.m);
    double floor_sum = 0.0;
    for (std::size_t j = 0; j < ev.m; ++j) {
        ev.floor_w[j] = ev.eps * ev.x(k, j);
        floor_sum += ev.floor_w[j];
    }
    if (floor_sum > 1.0)
        throw SolverFailure("epsilon floor exceeds the input-weight normalization for DMU " +
                            data.record(k).id);

    // Upper search bounds for u from the summed activity constraints:
    // u_i * q_is <= v.x_s <= max_j x_js / x_jk on the normalization slice.
    ev.cap_u.assign(ev.n, 0.0);
    for (std::size_t i = 0; i < ev.n; ++i) {
        double cap = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < ev.S; ++s) {
            const double qs = ev.q(s, i);
            if (qs <= 0.0) continue;
            double ratio_max = 0.0;
            for (std::size_t j = 0; j < ev.m; ++j)
                ratio_max = std::max(ratio_max, ev.x(s, j) / ev.x(k, j));
            cap = std::min(cap, ratio_max / qs);
        }
        ev.cap_u[i] = std::isfinite(cap) ? std::max(cap, ev.eps) : ev.eps;
    }

    SolverConfig lp_cfg;
    lp_cfg.epsilon = scenario.epsilon;

    double best_obj = -std::numeric_limits<double>::infinity();
    Snapshot best_snap;
    bool any_feasible = false;

    const double spare = 1.0 - floor_sum;
    for (int t = 0; t < search.num_starts; ++t) {
        std::mt19937_64 eng(splitmix64(
            splitmix64(search.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(k) + 1))) ^
            (static_cast<std::uint64_t>(t) + 1)));

        ev.lambda.assign(ev.m, 0.0);
        ev.beta.assign(ev.p, 0.0);
        ev.w.assign(ev.m, 0.0);
        ev.u.assign(ev.n, 0.0);
        if (t == 0) {
            // Deterministic centered start.
            for (std::size_t j = 0; j < ev.m; ++j) ev.lambda[j] = 0.5 * (box.llo + box.lhi);
            for (std::size_t r = 0; r < ev.p; ++r) ev.beta[r] = 0.5 * (box.blo + box.bhi);
            for (std::size_t j = 0; j < ev.m; ++j)
                ev.w[j] = ev.floor_w[j] + spare / static_cast<double>(ev.m);
            for (std::size_t i = 0; i < ev.n; ++i) ev.u[i] = ev.eps;
        } else {
            for (std::size_t j = 0; j < ev.m; ++j)
                ev.lambda[j] = box.llo + uniform01(eng) * (box.lhi - box.llo);
            for (std::size_t r = 0; r < ev.p; ++r)
                ev.beta[r] = box.blo + uniform01(eng) * (box.bhi - box.blo);
            double gsum = 0.0;
            std::vector<double> g(ev.m);
            for (std::size_t j = 0; j < ev.m; ++j) {
                g[j] = -std::log(1.0 - uniform01(eng) * (1.0 - 1e-12));
                gsum += g[j];
            }
            for (std::size_t j = 0; j < ev.m; ++j)
                ev.w[j] = ev.floor_w[j] + spare * g[j] / gsum;
            for (std::size_t i = 0; i < ev.n; ++i)
                ev.u[i] = ev.eps + uniform01(eng) * (ev.cap_u[i] - ev.eps) * 0.25;
        }
        ev.recompute();

        // Pull the sampled u toward the constraint boundary before descending.
        double rho = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < ev.S; ++s) {
            if (ev.QT[s] > 0.0) rho = std::min(rho, ev.XT[s] / ev.QT[s]);
            if (ev.QR[s] > 0.0) rho = std::min(rho, (ev.VX[s] - ev.XT[s]) / ev.QR[s]);
        }
        if (std::isfinite(rho) && rho > 0.0) {
            const double scale = std::min(rho * 0.95, 50.0);
            if (scale > 1.0) {
                for (std::size_t i = 0; i < ev.n; ++i)
                    ev.u[i] = std::min(std::max(ev.eps, ev.u[i] * scale), ev.cap_u[i]);
                ev.recompute();
            }
        }

        for (const double P : {10.0, 100.0, 1000.0, 10000.0}) descend(ev, P, false, 0.25, 300);
        if (!repair(ev)) continue;
        descend(ev, 0.0, true, 0.05, 120);
        refit_u(ev, lp_cfg);
        if (ev.max_violation() > kFeasSlack && !repair(ev)) continue;

        const double obj = ev.objective();
        if (obj > best_obj) {
            best_obj = obj;
            best_snap = save(ev);
            any_feasible = true;
        }
    }

    if (!any_feasible)
        throw SolverFailure("no start produced a feasible point for DMU " + data.record(k).id);

    restore(ev, best_snap);
    polish_outer(ev, lp_cfg);
    if (ev.max_violation() > kFeasSlack)
        throw SolverFailure("optimizer left the feasible region for DMU " + data.record(k).id);
    return assemble(ev, structure, scenario);
}

MadeaRun madea_all(const Dataset& data, const ActivityStructure& structure,
                   const ScenarioSpec& scenario, const MadeaSearchConfig& search) {
    MadeaRun run;
    run.results.reserve(data.size());
    for (std::size_t k = 0; k < data.size(); ++k)
        run.results.push_back(madea_score(data, structure, scenario, k, search));
    run.summary = summarize(run.results);
    return run;
}

MadeaSummary summarize(const std::vector<MadeaResult>& results) {
    if (results.empty()) throw EmptyDataset("no results to summarize");
    std::vector<double> total, teaching, research, alpha;
    total.reserve(results.size());
    for (const auto& r : results) {
        total.push_back(r.total);
        teaching.push_back(r.teaching);
        research.push_back(r.research);
        alpha.push_back(r.alpha_teaching);
    }
    MadeaSummary s;
    s.total = descriptive_stats(total);
    s.teaching = descriptive_stats(teaching);
    s.research = descriptive_stats(research);
    s.alpha_teaching = descriptive_stats(alpha);
    for (const auto& r : results) {
        if (r.total >= 1.0 - kEfficientBand) ++s.efficient_total;
        if (r.teaching >= 1.0 - kEfficientBand) ++s.efficient_teaching;
        if (r.research >= 1.0 - kEfficientBand) ++s.efficient_research;
    }
    return s;
}

MadeaDiagnostics verify_madea(const Dataset& data, const ActivityStructure& structure,
                              const ScenarioSpec& scenario, const MadeaResult& result) {
    structure.check(data.num_inputs(), data.num_outputs());
    const std::size_t m = data.num_inputs(), n = data.num_outputs(), S = data.size();
    const std::size_t k = data.index_of(result.id);
    const Boxes box = effective_boxes(structure, scenario);
    const Wiring wiring = make_wiring(structure, n);
    if (result.input_weights.size() != m || result.output_weights.size() != n ||
        result.lambdas.size() != structure.shared_inputs.size() ||
        result.betas.size() != structure.split_outputs.size())
        throw DimensionMismatch("result vectors do not match the structure");

    // Lambda back onto input indices.
    std::vector<double> lambda(m, 0.0);
    for (std::size_t pos = 0; pos < structure.shared_inputs.size(); ++pos)
        lambda[structure.shared_inputs[pos]] = result.lambdas[pos];

    MadeaDiagnostics d;
    std::vector<double> xt(S, 0.0), xr(S, 0.0), qt(S, 0.0), qr(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        const auto& rec = data.record(s);
        for (std::size_t j = 0; j < m; ++j) {
            const double vx = result.input_weights[j] * rec.inputs[j];
            xt[s] += lambda[j] * vx;
            xr[s] += (1.0 - lambda[j]) * vx;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double uq = result.output_weights[i] * rec.outputs[i];
            switch (wiring.category[i]) {
                case kTeach: qt[s] += uq; break;
                case kResearch: qr[s] += uq; break;
                default: {
                    const double b = result.betas[wiring.split_pos[i]];
                    qt[s] += b * uq;
                    qr[s] += (1.0 - b) * uq;
                }
            }
        }
        const double scale = xt[s] + xr[s];
        d.worst_teaching_excess = std::max(d.worst_teaching_excess, (qt[s] - xt[s]) / scale);
        d.worst_research_excess = std::max(d.worst_research_excess, (qr[s] - xr[s]) / scale);
    }

    const double theta_t = qt[k] / xt[k];
    const double theta_r = qr[k] / xr[k];
    double alpha_t = result.alpha_teaching;
    d.objective_gap = std::fabs(result.total -
                                (alpha_t * theta_t + result.alpha_research * theta_r));
    d.alpha_sum_gap = std::fabs(result.alpha_teaching + result.alpha_research - 1.0);
    if (scenario.kind == AlphaMode::EndogenousAlpha)
        d.alpha_link_gap = std::fabs(result.alpha_teaching - xt[k] / (xt[k] + xr[k]));
    else
        d.alpha_link_gap = std::fabs(result.alpha_teaching - scenario.fixed_alpha);

    for (double l : result.lambdas)
        d.box_violation = std::max({d.box_violation, box.llo - l, l - box.lhi});
    for (double b : result.betas)
        d.box_violation = std::max({d.box_violation, box.blo - b, b - box.bhi});
    for (double v : result.input_weights)
        d.floor_violation = std::max(d.floor_violation, scenario.epsilon - v);
    for (double u : result.output_weights)
        d.floor_violation = std::max(d.floor_violation, scenario.epsilon - u);
    return d;
}

double madea_oracle(const Dataset& data, const ActivityStructure& structure,
                    const ScenarioSpec& scenario, std::size_t k, std::size_t grid_resolution) {
    structure.check(data.num_inputs(), data.num_outputs());
    if (k >= data.size()) throw DimensionMismatch("DMU index out of range");
    const std::size_t m = data.num_inputs(), n = data.num_outputs(), S = data.size();
    if (S > 4 || m > 2 || n > 3)
        throw IntractableSize("oracle is restricted to S <= 4, m <= 2, n <= 3");
    if (grid_resolution < 5)
        throw IntractableSize("grid resolution below the supported minimum of 5");

    const Boxes box = effective_boxes(structure, scenario);
    const Wiring wiring = make_wiring(structure, n);
    const double eps = scenario.epsilon;
    const std::size_t G = grid_resolution + 1;  // points per dimension

    std::vector<double> floor_w(m);
    double floor_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        floor_w[j] = eps * data.record(k).inputs[j];
        floor_sum += floor_w[j];
    }
    if (floor_sum > 1.0)
        throw SolverFailure("epsilon floor exceeds the input-weight normalization for DMU " +
                            data.record(k).id);

    auto linspace = [G](double lo, double hi) {
        std::vector<double> pts(G);
        for (std::size_t i = 0; i < G; ++i)
            pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(G - 1);
        return pts;
    };

    Evaluator ev;
    ev.data = &data;
    ev.wiring = &wiring;
    ev.k = k;
    ev.m = m;
    ev.n = n;
    ev.S = S;
    ev.p = structure.split_outputs.size();
    ev.mode = scenario.kind;
    ev.fixed_alpha = scenario.fixed_alpha;
    ev.eps = eps;
    ev.box = box;
    ev.floor_w = floor_w;
    ev.cap_u.assign(n, 0.0);

    SolverConfig lp_cfg;
    lp_cfg.epsilon = eps;

    const std::vector<double> lgrid = linspace(box.llo, box.lhi);
    const std::vector<double> bgrid = linspace(box.blo, box.bhi);
    std::vector<double> wgrid{1.0};
    if (m == 2) wgrid = linspace(floor_w[0], 1.0 - floor_w[1]);

    // Odometer over the lambda and beta dimensions.
    const std::size_t p = ev.p;
    std::vector<std::size_t> lidx(m, 0), bidx(p, 0);
    double best = -std::numeric_limits<double>::infinity();

    auto advance = [](std::vector<std::size_t>& idx, std::size_t base) {
        for (std::size_t d = 0; d < idx.size(); ++d) {
            if (++idx[d] < base) return true;
            idx[d] = 0;
        }
        return false;
    };

    do {
        ev.lambda.resize(m);
        for (std::size_t j = 0; j < m; ++j) ev.lambda[j] = lgrid[lidx[j]];
        for (std::size_t wi = 0; wi < wgrid.size(); ++wi) {
            ev.w.assign(m, 1.0);
            if (m == 2) {
                ev.w[0] = wgrid[wi];
                ev.w[1] = 1.0 - wgrid[wi];
                if (ev.w[1] < floor_w[1] - 1e-15) continue;
            }
            std::fill(bidx.begin(), bidx.end(), 0);
            do {
                ev.beta.resize(p);
                for (std::size_t r = 0; r < p; ++r) ev.beta[r] = bgrid[bidx[r]];
                ev.u.assign(n, eps);
                ev.recompute();
                if (refit_u(ev, lp_cfg) && ev.max_violation() <= 1e-12)
                    best = std::max(best, ev.objective());
            } while (p > 0 && advance(bidx, G));
        }
    } while (advance(lidx, G));

    if (!std::isfinite(best))
        throw SolverFailure("no feasible grid point for DMU " + data.record(k).id);
    return best;
}

}  // namespace frontier
