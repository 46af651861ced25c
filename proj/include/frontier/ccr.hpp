#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "frontier/dataset.hpp"
#include "frontier/linprog.hpp"

namespace frontier {

struct CcrResult {
    std::string id;
    double score = 0.0;                  // in (0, 1] up to solver tolerance
    std::vector<double> input_weights;   // v, one per input
    std::vector<double> output_weights;  // u, one per output
};

// Constant-returns-to-scale radial efficiency of DMU k, solved through the
// Charnes-Cooper linearization of the weight-ratio program: maximize u.q_k
// subject to v.x_k = 1, u.q_s - v.x_s <= 0 for every DMU s, and u, v >= epsilon.
//
// Throws InfeasibleEpsilon when the epsilon floor alone makes the program
// infeasible, SolverFailure (or a subclass) when the solver cannot certify an
// optimum.
CcrResult ccr_score(const Dataset& data, std::size_t k, const SolverConfig& config = {});

// Scores every DMU against the common frontier, in dataset order.
std::vector<CcrResult> ccr_all(const Dataset& data, const SolverConfig& config = {});

}  // namespace frontier
