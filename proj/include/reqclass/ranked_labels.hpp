#pragma once

#include <string>
#include <vector>

namespace reqclass {

struct ScoredLabel {
    std::string node_id;
    double score = 0.0;

    friend bool operator==(const ScoredLabel&, const ScoredLabel&) = default;
};

/// Classifier output for one requirement, best label first.
struct RankedLabels {
    std::string requirement_id;
    std::vector<ScoredLabel> labels;
};

/// Strict weak order: score descending, then node id ascending.
inline bool ranks_before(const ScoredLabel& a, const ScoredLabel& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.node_id < b.node_id;
}

}  // namespace reqclass
