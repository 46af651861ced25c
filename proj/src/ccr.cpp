#include "frontier/ccr.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "frontier/errors.hpp"

namespace frontier {

CcrResult ccr_score(const Dataset& data, std::size_t k, const SolverConfig& config) {
    if (k >= data.size()) throw std::out_of_range("DMU index out of range");
    const std::size_t m = data.num_inputs();
    const std::size_t n = data.num_outputs();
    const std::size_t S = data.size();
    const auto& target = data.record(k);

    // With v >= eps the normalization v.x_k = 1 is only reachable when the
    // all-eps point does not already overshoot it.
    const double floor_value =
        config.epsilon * std::accumulate(target.inputs.begin(), target.inputs.end(), 0.0);
    if (floor_value > 1.0 + config.feasibility_tol)
        throw InfeasibleEpsilon("epsilon floor exceeds the weight normalization for DMU " +
                                target.id);

    // Variables: [u_1..u_n, v_1..v_m].
    LinearProgram lp;
    lp.objective.assign(n + m, 0.0);
    for (std::size_t i = 0; i < n; ++i) lp.objective[i] = target.outputs[i];
    lp.lower.assign(n + m, config.epsilon);
    lp.upper.assign(n + m, LinearProgram::kInfinity);

    LinearConstraint norm;
    norm.coeffs.assign(n + m, 0.0);
    for (std::size_t j = 0; j < m; ++j) norm.coeffs[n + j] = target.inputs[j];
    norm.relation = Relation::Equal;
    norm.rhs = 1.0;
    lp.constraints.push_back(std::move(norm));

    for (std::size_t s = 0; s < S; ++s) {
        const auto& rec = data.record(s);
        LinearConstraint ratio;
        ratio.coeffs.assign(n + m, 0.0);
        for (std::size_t i = 0; i < n; ++i) ratio.coeffs[i] = rec.outputs[i];
        for (std::size_t j = 0; j < m; ++j) ratio.coeffs[n + j] = -rec.inputs[j];
        ratio.relation = Relation::LessEq;
        ratio.rhs = 0.0;
        lp.constraints.push_back(std::move(ratio));
    }

    const LpSolution sol = solve_lp(lp, config);
    if (sol.status == LpStatus::Infeasible)
        throw InfeasibleEpsilon("weight floor epsilon=" + std::to_string(config.epsilon) +
                                " leaves no feasible weights for DMU " + target.id);
    if (sol.status != LpStatus::Optimal)
        throw SolverFailure("efficiency program for DMU " + target.id +
                            " did not reach an optimum");

    CcrResult out;
    out.id = target.id;
    out.score = sol.objective;
    out.output_weights.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n));
    out.input_weights.assign(sol.x.begin() + static_cast<long>(n), sol.x.end());
    return out;
}

std::vector<CcrResult> ccr_all(const Dataset& data, const SolverConfig& config) {
    std::vector<CcrResult> out;
    out.reserve(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) out.push_back(ccr_score(data, k, config));
    return out;
}

}  // namespace frontier
