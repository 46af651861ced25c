#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frontier/dataset.hpp"
#include "frontier/stats.hpp"

namespace frontier {

// Wiring of a two-activity (teaching/research) production process over a
// dataset's columns, by index. Every input is shared and carries a teaching
// share lambda; every output belongs to exactly one category, split outputs
// carrying a teaching share beta. Optional boxes override the scenario's.
struct ActivityStructure {
    std::vector<std::size_t> shared_inputs;
    std::vector<std::size_t> teaching_outputs;
    std::vector<std::size_t> research_outputs;
    std::vector<std::size_t> split_outputs;
    std::optional<std::array<double, 2>> lambda_bounds;
    std::optional<std::array<double, 2>> beta_bounds;

    // Coverage and range checks; throws DimensionMismatch when an index is out
    // of range, missing, or assigned twice, ConfigError for an invalid box.
    void check(std::size_t num_inputs, std::size_t num_outputs) const;
};

enum class AlphaMode { FixedAlpha, EndogenousAlpha };

struct ScenarioSpec {
    AlphaMode kind = AlphaMode::FixedAlpha;
    double fixed_alpha = 0.5;  // teaching priority when FixedAlpha
    double lambda_lo = 0.01, lambda_hi = 0.99;
    double beta_lo = 0.01, beta_hi = 0.99;
    double epsilon = 1e-5;

    // Equal priorities, wide split box.
    static ScenarioSpec scenario1();
    // Endogenous priorities (teaching share of weighted inputs), narrow box.
    static ScenarioSpec scenario2();
};

struct MadeaResult {
    std::string id;
    double total = 0.0;
    double teaching = 0.0;
    double research = 0.0;
    double alpha_teaching = 0.0;
    double alpha_research = 0.0;
    std::vector<double> lambdas;         // aligned with structure.shared_inputs
    std::vector<double> betas;           // aligned with structure.split_outputs
    std::vector<double> input_weights;   // v, aligned with dataset inputs
    std::vector<double> output_weights;  // u, aligned with dataset outputs
};

struct MadeaSearchConfig {
    int num_starts = 64;
    std::uint64_t seed = 0;
};

struct MadeaSummary {
    VariableStats total;
    VariableStats teaching;
    VariableStats research;
    VariableStats alpha_teaching;
    int efficient_total = 0;     // total score >= 1 - 1e-6
    int efficient_teaching = 0;  // activity score >= 1 - 1e-6
    int efficient_research = 0;
};

struct MadeaRun {
    std::vector<MadeaResult> results;
    MadeaSummary summary;
};

// Violations of the model identities measured at a reported optimum by direct
// re-evaluation, independent of the solver's bookkeeping. All should sit at
// roundoff scale for a valid result.
struct MadeaDiagnostics {
    double objective_gap = 0.0;        // |reported total - alpha-weighted ratios|
    double alpha_sum_gap = 0.0;        // |alpha_T + alpha_R - 1|
    double alpha_link_gap = 0.0;       // |alpha_T - weighted-input share| (endogenous only)
    double worst_teaching_excess = 0.0;  // max_s teaching output minus input, scaled
    double worst_research_excess = 0.0;
    double box_violation = 0.0;        // distance of any lambda/beta outside its box
    double floor_violation = 0.0;      // distance of any weight below epsilon
};

// Joint teaching/research efficiency of DMU k: maximize the alpha-weighted
// activity ratios subject to both per-activity ratio systems staying <= 1 for
// every DMU, with shared-input splits lambda, split-output shares beta, and
// weights floored at epsilon. Nonconvex; solved by seeded multistart local
// search (penalty stages, then feasibility-hard polish), so the result is the
// best certified-feasible point found, not a global optimum. Deterministic
// for identical inputs and seed. Throws SolverFailure when no start yields a
// feasible point, DimensionMismatch for structure/dataset disagreements.
MadeaResult madea_score(const Dataset& data, const ActivityStructure& structure,
                        const ScenarioSpec& scenario, std::size_t k,
                        const MadeaSearchConfig& search = {});

// Scores every DMU and aggregates the summary statistics.
MadeaRun madea_all(const Dataset& data, const ActivityStructure& structure,
                   const ScenarioSpec& scenario, const MadeaSearchConfig& search = {});

// Summary arithmetic alone, reusable for ingested score tables.
MadeaSummary summarize(const std::vector<MadeaResult>& results);

MadeaDiagnostics verify_madea(const Dataset& data, const ActivityStructure& structure,
                              const ScenarioSpec& scenario, const MadeaResult& result);

// Certified lower bound on the DMU-k objective: exhaustive Cartesian grid over
// the lambda/beta/input-weight space (grid_resolution counts subdivisions per
// dimension, so doubling it refines the grid in place) with the output weights
// maximized exactly at each grid point. Every candidate is feasibility-checked
// before it may contribute. Throws IntractableSize beyond desk scale
// (S <= 4, m <= 2, n <= 3, grid_resolution >= 5).
double madea_oracle(const Dataset& data, const ActivityStructure& structure,
                    const ScenarioSpec& scenario, std::size_t k, std::size_t grid_resolution);

}  // namespace frontier
