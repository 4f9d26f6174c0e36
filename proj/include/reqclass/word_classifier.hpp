#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reqclass/embeddings.hpp"
#include "reqclass/ranked_labels.hpp"
#include "reqclass/taxonomy.hpp"
#include "reqclass/textproc.hpp"

namespace reqclass {

/// node id -> score, nonzero entries only.
using NodeScores = std::map<std::string, double>;

struct NounClassScores {
    std::string noun;
    NodeScores scores;
};

/// Stemmed taxonomy noun -> nodes whose effective text contains it.
/// The set size is the class frequency f used by both predictors.
using ClassNounIndex = std::map<std::string, std::set<std::string>>;

ClassNounIndex class_noun_index(const Taxonomy& t, const TextPipeline& pipeline);

/// Where the noun-proxy cosine enters the similarity predictor.
enum class CosinePlacement {
    Denominator,  // 1 / (f_proxy * cos), as published
    Numerator,    // cos / f_proxy
};

enum class ProxyAggregation { Sum, Max };

struct WordClassifierOptions {
    std::size_t k = 15;
    std::size_t proxy_count = 10;
    CosinePlacement cosine_placement = CosinePlacement::Denominator;
    ProxyAggregation proxy_aggregation = ProxyAggregation::Sum;
};

/// Every node containing the stem scores 1/f.
NodeScores exact_match_score(std::string_view stem, const ClassNounIndex& index);

/// Similarity predictor over an explicit proxy list; proxies are stemmed with
/// `pipeline` before the index lookup.
NodeScores similarity_score(std::span<const Proxy> proxies, const ClassNounIndex& index,
                            const TextPipeline& pipeline, const WordClassifierOptions& options = {});

/// Draws proxies for the noun (surface form, falling back to its stem) from `store`.
NodeScores similarity_score(const Token& noun, const EmbeddingStore& store, const ClassNounIndex& index,
                            const TextPipeline& pipeline, const WordClassifierOptions& options = {});

/// (P_exact + P_similarity) / 2 over the union of scored nodes.
NodeScores combine_predictors(const NodeScores& exact, const NodeScores& similarity);

/// Per-noun budget: each noun keeps its best ceil(k/m) nodes, duplicates across
/// nouns keep the maximum, then the lowest are dropped until at most k remain.
std::vector<ScoredLabel> apply_label_budget(std::span<const NounClassScores> per_noun, std::size_t k);

/// Word-based classifier bound to one taxonomy variant (flat or aggregated).
class WordClassifier {
public:
    WordClassifier(const Taxonomy& taxonomy, const EmbeddingStore& store, const TextPipeline& pipeline,
                   WordClassifierOptions options = {});

    const ClassNounIndex& index() const { return index_; }
    const WordClassifierOptions& options() const { return options_; }

    std::vector<NounClassScores> score_nouns(const Requirement& r) const;
    RankedLabels classify(const Requirement& r) const;

private:
    const EmbeddingStore* store_;
    const TextPipeline* pipeline_;
    WordClassifierOptions options_;
    ClassNounIndex index_;
};

}  // namespace reqclass
