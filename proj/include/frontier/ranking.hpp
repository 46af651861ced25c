#pragma once

#include <string>
#include <vector>

namespace frontier {

struct ScoreEntry {
    std::string id;
    double score = 0.0;
};

struct RankedItem {
    std::string id;
    double rank = 0.0;  // 1 = best; exact ties share the mean of their positions
};

// Ranks scores best-first (descending by default). Exactly equal scores form a
// tie block whose members all receive the block's mean position. The returned
// list is ordered by rank, ties broken by id for a stable presentation.
// Throws NonFiniteScore on NaN or infinite scores, IdSetMismatch on duplicate
// ids.
std::vector<RankedItem> rank_from_scores(const std::vector<ScoreEntry>& scores,
                                         bool descending = true);

// Normalized Kendall distance between two score lists over the same id set:
// the fraction of unordered pairs ordered strictly oppositely by the two
// lists, out of S(S-1)/2. Pairs tied in either list contribute zero, so the
// value lies in [0, 1]; lists with fewer than two entries are at distance 0.
// Throws IdSetMismatch when the id sets differ (or contain duplicates) and
// NonFiniteScore on NaN or infinite scores.
double kendall_distance(const std::vector<ScoreEntry>& a, const std::vector<ScoreEntry>& b);

}  // namespace frontier
