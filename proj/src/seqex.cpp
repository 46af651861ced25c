#include "frontier/seqex.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "frontier/ccr.hpp"
#include "frontier/errors.hpp"

namespace frontier {

namespace {

constexpr double kEfficientBand = 1e-9;  // score >= 1 - band counts as efficient

std::vector<double> scaled_point(const Dataset& data, std::size_t k,
                                 const std::vector<double>& divisors) {
    std::vector<double> p = data.point(k);
    for (std::size_t d = 0; d < p.size(); ++d) p[d] /= divisors[d];
    return p;
}

}  // namespace

std::vector<double> barycenter(const Dataset& data, const std::vector<std::size_t>& active) {
    if (active.empty()) throw EmptyActiveSet("barycenter of an empty active set");
    const std::size_t dims = data.num_inputs() + data.num_outputs();
    std::vector<double> mean(dims, 0.0);
    for (std::size_t k : active) {
        const std::vector<double> p = data.point(k);
        for (std::size_t d = 0; d < dims; ++d) mean[d] += p[d];
    }
    for (double& v : mean) v /= static_cast<double>(active.size());
    return mean;
}

double heterogeneity_mu(const Dataset& data, const std::vector<std::size_t>& active,
                        bool scale_distances) {
    if (active.empty()) throw EmptyActiveSet("heterogeneity of an empty active set");
    const std::size_t dims = data.num_inputs() + data.num_outputs();

    std::vector<double> divisors(dims, 1.0);
    if (scale_distances) {
        std::vector<double> mx(dims, 0.0);
        for (std::size_t k : active) {
            const std::vector<double> p = data.point(k);
            for (std::size_t d = 0; d < dims; ++d) mx[d] = std::max(mx[d], std::fabs(p[d]));
        }
        for (std::size_t d = 0; d < dims; ++d)
            if (mx[d] > 0.0) divisors[d] = mx[d];
    }

    std::vector<double> center(dims, 0.0);
    for (std::size_t k : active) {
        const std::vector<double> p = scaled_point(data, k, divisors);
        for (std::size_t d = 0; d < dims; ++d) center[d] += p[d];
    }
    for (double& v : center) v /= static_cast<double>(active.size());

    double sum = 0.0, mx = 0.0;
    for (std::size_t k : active) {
        const std::vector<double> p = scaled_point(data, k, divisors);
        double sq = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double diff = p[d] - center[d];
            sq += diff * diff;
        }
        const double dist = std::sqrt(sq);
        sum += dist;
        mx = std::max(mx, dist);
    }
    if (mx <= 0.0)
        throw DegenerateSample("active units coincide, dispersion index undefined");
    return (sum / static_cast<double>(active.size())) / mx;
}

DmuRecord generator(const DmuRecord& unit, const std::vector<double>& bary, double mu,
                    std::size_t num_inputs) {
    const std::size_t dims = unit.inputs.size() + unit.outputs.size();
    if (bary.size() != dims || unit.inputs.size() != num_inputs)
        throw DimensionMismatch("barycenter length does not match the unit's dimensions");
    DmuRecord g;
    g.id = unit.id;
    g.inputs.resize(unit.inputs.size());
    g.outputs.resize(unit.outputs.size());
    for (std::size_t j = 0; j < unit.inputs.size(); ++j)
        g.inputs[j] = mu * bary[j] + (1.0 - mu) * unit.inputs[j];
    for (std::size_t i = 0; i < unit.outputs.size(); ++i)
        g.outputs[i] = mu * bary[num_inputs + i] + (1.0 - mu) * unit.outputs[i];
    return g;
}

SeqExResult seqex_run(const Dataset& data, const SeqExConfig& config) {
    if (config.mu && !(*config.mu >= 0.0 && *config.mu <= 1.0))
        throw ConfigError("mu must lie in [0, 1]");

    const std::size_t S = data.size();
    std::vector<std::size_t> active(S);
    for (std::size_t k = 0; k < S; ++k) active[k] = k;

    std::unordered_map<std::string, double> finals;
    finals.reserve(S);
    SeqExResult result;

    while (!active.empty()) {
        if (result.trace.size() > S)
            throw Error("sequential exclusion failed to terminate");
        SeqExRound round;

        std::vector<DmuRecord> sub_records;
        sub_records.reserve(active.size());
        for (std::size_t k : active) {
            sub_records.push_back(data.record(k));
            round.active_ids.push_back(data.record(k).id);
        }
        const Dataset sub(data.input_names(), data.output_names(), sub_records);

        const std::vector<CcrResult> base = ccr_all(sub, config.solver);
        std::vector<std::size_t> eff, ineff;  // indices into sub
        for (std::size_t s = 0; s < base.size(); ++s) {
            if (base[s].score >= 1.0 - kEfficientBand) eff.push_back(s);
            else ineff.push_back(s);
        }

        std::vector<std::size_t> all_sub(sub.size());
        for (std::size_t s = 0; s < sub.size(); ++s) all_sub[s] = s;
        round.barycenter = barycenter(sub, all_sub);

        if (config.mu) {
            round.mu = {*config.mu, HeterogeneityIndex::Source::Supplied};
        } else if (sub.size() == 1) {
            // A lone unit has no dispersion; the weight is irrelevant because
            // there is nothing to re-score.
            round.mu = {1.0, HeterogeneityIndex::Source::Computed};
        } else {
            round.mu = {heterogeneity_mu(sub, all_sub, config.scale_distances),
                        HeterogeneityIndex::Source::Computed};
        }
        if (!config.mu && sub.size() > 1) {
            // Recompute the dispersion stats in the same scaling for the trace.
            const std::size_t dims = data.num_inputs() + data.num_outputs();
            std::vector<double> divisors(dims, 1.0);
            if (config.scale_distances) {
                std::vector<double> mx(dims, 0.0);
                for (std::size_t s = 0; s < sub.size(); ++s) {
                    const std::vector<double> p = sub.point(s);
                    for (std::size_t d = 0; d < dims; ++d)
                        mx[d] = std::max(mx[d], std::fabs(p[d]));
                }
                for (std::size_t d = 0; d < dims; ++d)
                    if (mx[d] > 0.0) divisors[d] = mx[d];
            }
            std::vector<double> center(dims, 0.0);
            for (std::size_t s = 0; s < sub.size(); ++s) {
                std::vector<double> p = sub.point(s);
                for (std::size_t d = 0; d < dims; ++d) center[d] += p[d] / divisors[d];
            }
            for (double& v : center) v /= static_cast<double>(sub.size());
            double sum = 0.0, mxd = 0.0;
            for (std::size_t s = 0; s < sub.size(); ++s) {
                std::vector<double> p = sub.point(s);
                double sq = 0.0;
                for (std::size_t d = 0; d < dims; ++d) {
                    const double diff = p[d] / divisors[d] - center[d];
                    sq += diff * diff;
                }
                const double dist = std::sqrt(sq);
                sum += dist;
                mxd = std::max(mxd, dist);
            }
            round.mean_distance = sum / static_cast<double>(sub.size());
            round.max_distance = mxd;
        }

        for (std::size_t s : eff) round.efficient_ids.push_back(sub.record(s).id);

        double mu_used = round.mu.value;
        std::vector<std::size_t> excluded;  // indices into sub
        std::vector<ScoreEntry> rescored;
        for (int attempt = 0; attempt < 2; ++attempt) {
            rescored.clear();
            excluded.clear();
            round.generators.clear();

            std::vector<DmuRecord> mod_records = sub_records;
            for (std::size_t s : eff) {
                mod_records[s] =
                    generator(sub.record(s), round.barycenter, mu_used, sub.num_inputs());
                round.generators.push_back(mod_records[s]);
            }
            const Dataset modified(data.input_names(), data.output_names(), mod_records);

            for (std::size_t s : ineff) {
                const CcrResult r = ccr_score(modified, s, config.solver);
                rescored.push_back({r.id, r.score});
                if (r.score < 1.0 - kEfficientBand) excluded.push_back(s);
            }
            if (!excluded.empty() || attempt == 1) break;
            const double bumped = std::min(1.0, mu_used * 1.5);
            if (bumped == mu_used) break;  // already at the cap, nothing to retry
            mu_used = bumped;
            round.escalated = true;
            round.mu.value = mu_used;
        }
        round.rescored = rescored;
        for (std::size_t s : excluded) round.excluded_ids.push_back(sub.record(s).id);
        result.trace.push_back(round);

        if (excluded.empty()) {
            for (std::size_t k : active) finals[data.record(k).id] = 1.0;
            break;
        }
        for (const auto& e : rescored)
            if (std::find(round.excluded_ids.begin(), round.excluded_ids.end(), e.id) !=
                round.excluded_ids.end())
                finals[e.id] = e.score;

        std::vector<std::size_t> next;
        next.reserve(active.size() - excluded.size());
        std::size_t drop = 0;
        for (std::size_t s = 0; s < active.size(); ++s) {
            if (drop < excluded.size() && excluded[drop] == s) { ++drop; continue; }
            next.push_back(active[s]);
        }
        active = std::move(next);
    }

    result.final_scores.reserve(S);
    for (std::size_t k = 0; k < S; ++k) {
        const std::string& id = data.record(k).id;
        result.final_scores.push_back({id, finals.at(id)});
    }
    return result;
}

}  // namespace frontier
