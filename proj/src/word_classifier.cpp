#include "reqclass/word_classifier.hpp"

#include <algorithm>

#include "reqclass/utf8.hpp"

namespace reqclass {

ClassNounIndex class_noun_index(const Taxonomy& t, const TextPipeline& pipeline) {
    ClassNounIndex index;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& id = t.node(i).id;
        for (const auto& tok : extract_nouns(pipeline.preprocess(t.effective_text(i), id))) index[tok.stem].insert(id);
    }
    return index;
}

NodeScores exact_match_score(std::string_view stem, const ClassNounIndex& index) {
    NodeScores out;
    auto it = index.find(std::string(stem));
    if (it == index.end() || it->second.empty()) return out;
    const double score = 1.0 / static_cast<double>(it->second.size());
    for (const auto& id : it->second) out.emplace(id, score);
    return out;
}

NodeScores similarity_score(std::span<const Proxy> proxies, const ClassNounIndex& index,
                            const TextPipeline& pipeline, const WordClassifierOptions& options) {
    NodeScores out;
    for (const auto& proxy : proxies) {
        auto it = index.find(pipeline.stem(utf8::to_lower(proxy.word)));
        if (it == index.end() || it->second.empty()) continue;
        const double f = static_cast<double>(it->second.size());
        const double cos = std::max(proxy.similarity, kSimilarityFloor);
        const double term = options.cosine_placement == CosinePlacement::Denominator ? 1.0 / (f * cos) : cos / f;
        for (const auto& id : it->second) {
            auto [slot, inserted] = out.emplace(id, term);
            if (inserted) continue;
            if (options.proxy_aggregation == ProxyAggregation::Sum)
                slot->second += term;
            else
                slot->second = std::max(slot->second, term);
        }
    }
    return out;
}

NodeScores similarity_score(const Token& noun, const EmbeddingStore& store, const ClassNounIndex& index,
                            const TextPipeline& pipeline, const WordClassifierOptions& options) {
    const std::string& key = store.contains(noun.surface) ? noun.surface : noun.stem;
    auto proxies = store.top_proxies(key, options.proxy_count);
    return similarity_score(proxies, index, pipeline, options);
}

NodeScores combine_predictors(const NodeScores& exact, const NodeScores& similarity) {
    NodeScores out;
    for (const auto& [id, s] : exact) out[id] += s / 2.0;
    for (const auto& [id, s] : similarity) out[id] += s / 2.0;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
    return out;
}

std::vector<ScoredLabel> apply_label_budget(std::span<const NounClassScores> per_noun, std::size_t k) {
    if (k == 0) throw DomainError("label budget k must be at least 1");
    if (per_noun.empty()) return {};
    const std::size_t m = per_noun.size();
    const std::size_t per_noun_budget = (k + m - 1) / m;

    NodeScores merged;
    for (const auto& noun : per_noun) {
        std::vector<ScoredLabel> ranked;
        ranked.reserve(noun.scores.size());
        for (const auto& [id, s] : noun.scores) ranked.push_back({id, s});
        const auto keep = std::min(per_noun_budget, ranked.size());
        std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                          ranks_before);
        for (std::size_t i = 0; i < keep; ++i) {
            auto [slot, inserted] = merged.emplace(ranked[i].node_id, ranked[i].score);
            if (!inserted) slot->second = std::max(slot->second, ranked[i].score);
        }
    }

    std::vector<ScoredLabel> labels;
    labels.reserve(merged.size());
    for (const auto& [id, s] : merged) labels.push_back({id, s});
    std::sort(labels.begin(), labels.end(), ranks_before);
    if (labels.size() > k) labels.resize(k);
    return labels;
}

WordClassifier::WordClassifier(const Taxonomy& taxonomy, const EmbeddingStore& store, const TextPipeline& pipeline,
                               WordClassifierOptions options)
    : store_(&store), pipeline_(&pipeline), options_(options), index_(class_noun_index(taxonomy, pipeline)) {
    if (options_.k == 0) throw DomainError("label budget k must be at least 1");
}

std::vector<NounClassScores> WordClassifier::score_nouns(const Requirement& r) const {
    std::vector<NounClassScores> out;
    for (const auto& noun : extract_nouns(pipeline_->preprocess(r.text, r.id))) {
        auto exact = exact_match_score(noun.stem, index_);
        auto sim = similarity_score(noun, *store_, index_, *pipeline_, options_);
        out.push_back({noun.stem, combine_predictors(exact, sim)});
    }
    return out;
}

RankedLabels WordClassifier::classify(const Requirement& r) const {
    return RankedLabels{r.id, apply_label_budget(score_nouns(r), options_.k)};
}

}  // namespace reqclass
