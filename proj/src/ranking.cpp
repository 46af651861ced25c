#include "frontier/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <unordered_map>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

void check_finite(const std::vector<ScoreEntry>& scores) {
    for (const auto& e : scores)
        if (!std::isfinite(e.score))
            throw NonFiniteScore("score for " + e.id + " is not finite");
}

}  // namespace

std::vector<RankedItem> rank_from_scores(const std::vector<ScoreEntry>& scores,
                                         bool descending) {
    check_finite(scores);
    std::unordered_map<std::string, bool> seen;
    seen.reserve(scores.size());
    for (const auto& e : scores)
        if (!seen.emplace(e.id, true).second)
            throw IdSetMismatch("duplicate id " + e.id + " in score list");

    std::vector<ScoreEntry> order(scores);
    std::sort(order.begin(), order.end(), [descending](const ScoreEntry& a, const ScoreEntry& b) {
        if (a.score != b.score) return descending ? a.score > b.score : a.score < b.score;
        return a.id < b.id;
    });

    std::vector<RankedItem> out(order.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && order[j + 1].score == order[i].score) ++j;
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) out[t] = {order[t].id, mean_rank};
        i = j + 1;
    }
    return out;
}

double kendall_distance(const std::vector<ScoreEntry>& a, const std::vector<ScoreEntry>& b) {
    check_finite(a);
    check_finite(b);
    if (a.size() != b.size())
        throw IdSetMismatch("score lists rank different numbers of units");

    std::unordered_map<std::string, double> b_score;
    b_score.reserve(b.size());
    for (const auto& e : b)
        if (!b_score.emplace(e.id, e.score).second)
            throw IdSetMismatch("duplicate id " + e.id + " in score list");

    std::vector<double> sa(a.size()), sb(a.size());
    std::unordered_map<std::string, bool> seen_a;
    seen_a.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!seen_a.emplace(a[i].id, true).second)
            throw IdSetMismatch("duplicate id " + a[i].id + " in score list");
        auto it = b_score.find(a[i].id);
        if (it == b_score.end())
            throw IdSetMismatch("id " + a[i].id + " missing from the second list");
        sa[i] = a[i].score;
        sb[i] = it->second;
    }

    const std::size_t S = a.size();
    if (S < 2) return 0.0;
    std::size_t discordant = 0;
    for (std::size_t p = 0; p + 1 < S; ++p) {
        for (std::size_t q = p + 1; q < S; ++q) {
            const double da = sa[p] - sa[q];
            const double db = sb[p] - sb[q];
            if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) ++discordant;
        }
    }
    const double pairs = static_cast<double>(S) * static_cast<double>(S - 1) / 2.0;
    return static_cast<double>(discordant) / pairs;
}

}  // namespace frontier
