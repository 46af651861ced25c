#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frontier/dataset.hpp"
#include "frontier/linprog.hpp"
#include "frontier/ranking.hpp"

namespace frontier {

struct HeterogeneityIndex {
    enum class Source { Computed, Supplied };
    double value = 0.0;
    Source source = Source::Computed;
};

struct SeqExConfig {
    // Fixed contraction weight used in every round; when absent the weight is
    // recomputed each round from the active sample's dispersion.
    std::optional<double> mu;
    // Scale each dimension by its max over the active set before measuring
    // distances to the barycenter.
    bool scale_distances = true;
    SolverConfig solver;
};

struct SeqExRound {
    std::vector<std::string> active_ids;
    std::vector<double> barycenter;  // inputs then outputs, original coordinates
    HeterogeneityIndex mu;           // the weight the round's final attempt used
    double mean_distance = 0.0;      // dispersion stats behind a computed mu
    double max_distance = 0.0;
    std::vector<std::string> efficient_ids;   // frontier units replaced by generators
    std::vector<DmuRecord> generators;        // contracted stand-ins, same ids
    std::vector<ScoreEntry> rescored;         // inefficient units vs the modified sample
    std::vector<std::string> excluded_ids;    // rescored units still below the frontier
    bool escalated = false;  // first attempt excluded nobody, mu was raised once
};

struct SeqExResult {
    std::vector<ScoreEntry> final_scores;  // dataset order, one entry per DMU
    std::vector<SeqExRound> trace;
};

// Componentwise mean of the active units' concatenated (inputs, outputs)
// points. Throws EmptyActiveSet when no indices are given.
std::vector<double> barycenter(const Dataset& data, const std::vector<std::size_t>& active);

// Dispersion-based contraction weight: mean over max of the active units'
// Euclidean distances to their barycenter, optionally after per-dimension max
// scaling. Lies in (0, 1]. Throws EmptyActiveSet, or DegenerateSample when
// every active unit coincides with the barycenter.
double heterogeneity_mu(const Dataset& data, const std::vector<std::size_t>& active,
                        bool scale_distances = true);

// Contracted stand-in G = mu*B + (1-mu)*F, componentwise over inputs and
// outputs; keeps the unit's id. Throws DimensionMismatch when the barycenter
// length is not num_inputs + num_outputs.
DmuRecord generator(const DmuRecord& unit, const std::vector<double>& bary, double mu,
                    std::size_t num_inputs);

// Sequential exclusion of alternatives. Each round scores the active units,
// replaces the round's efficient units with their generators, re-scores the
// inefficient ones against the modified sample, and permanently excludes those
// still below the frontier at their new score. A round that excludes nobody
// escalates mu once (x1.5, capped at 1); if that also excludes nobody the
// survivors are finalized at score 1. Survivors always re-enter the next round
// with their original coordinates. Terminates within size() rounds.
SeqExResult seqex_run(const Dataset& data, const SeqExConfig& config = {});

}  // namespace frontier
