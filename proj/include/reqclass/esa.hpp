#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "reqclass/ranked_labels.hpp"
#include "reqclass/taxonomy.hpp"
#include "reqclass/textproc.hpp"

namespace reqclass {

/// Sparse weights over the concept space; nonnegative by construction.
using ConceptVector = Eigen::SparseVector<double>;

struct ConceptDocument {
    std::string id;
    std::string text;
};

struct ConceptPosting {
    Eigen::Index concept_id = 0;
    double weight = 0.0;
};

inline constexpr std::size_t kDefaultPruneN = 1000;

/// Inverted TF-IDF index: term -> best concepts. Immutable after build.
class ConceptIndex {
public:
    using Rows = std::unordered_map<std::string, std::vector<ConceptPosting>>;

    ConceptIndex() = default;
    ConceptIndex(std::vector<std::string> concepts, Rows rows, std::size_t prune_n, std::string language);

    const std::vector<std::string>& concepts() const { return concepts_; }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(concepts_.size()); }
    const Rows& rows() const { return rows_; }
    /// Empty for terms without postings.
    const std::vector<ConceptPosting>& row(const std::string& term) const;
    std::size_t prune_n() const { return prune_n_; }
    /// Language of the pipeline that produced the terms ("" when unknown).
    const std::string& language() const { return language_; }

private:
    std::vector<std::string> concepts_;
    Rows rows_;
    std::size_t prune_n_ = kDefaultPruneN;
    std::string language_;
};

/// Core builder over already-preprocessed term lists (one per concept).
/// tf = raw count, idf = ln(D / df); zero weights dropped; rows sorted by weight
/// descending (ties by concept order) and cut to prune_n.
ConceptIndex build_index(std::span<const std::pair<std::string, std::vector<std::string>>> documents,
                         std::size_t prune_n = kDefaultPruneN, std::string language = {});

/// Runs each document through `pipeline` (terms are stems) then builds.
ConceptIndex build_index(std::span<const ConceptDocument> corpus, const TextPipeline& pipeline,
                         std::size_t prune_n = kDefaultPruneN);

/// One regular file per concept, id = filename without extension, sorted by id.
std::vector<ConceptDocument> load_corpus(const std::string& directory);

/// entry(c) = sum over terms of count(term) * weight(term, c).
ConceptVector vectorize(std::span<const std::string> terms, const ConceptIndex& index);
ConceptVector vectorize(std::string_view text, const ConceptIndex& index, const TextPipeline& pipeline);

/// Cosine of two concept vectors; 0 when either is empty.
double relatedness(const ConceptVector& a, const ConceptVector& b);

/// Min-max scaling to [0,1]. A constant list is returned unchanged.
std::vector<double> min_max_normalize(std::vector<double> scores);

/// Versioned text cache, see README ("ESA index cache").
void save_index(const ConceptIndex& index, std::ostream& out);
ConceptIndex load_index(std::istream& in);
void save_index(const ConceptIndex& index, const std::string& path);
ConceptIndex load_index(const std::string& path);

/// Global sentence-based classifier: every node competes regardless of depth.
class SentenceClassifier {
public:
    SentenceClassifier(const Taxonomy& taxonomy, const ConceptIndex& index, const TextPipeline& pipeline,
                       std::size_t k = 15);

    /// Raw relatedness of every node (taxonomy order) to the aggregated requirement.
    std::vector<double> node_scores(const Requirement& r) const;
    RankedLabels classify(const Requirement& r) const;

    const ConceptVector& node_vector(std::size_t i) const { return node_vectors_.at(i); }

private:
    const Taxonomy* taxonomy_;
    const ConceptIndex* index_;
    const TextPipeline* pipeline_;
    std::size_t k_;
    std::vector<ConceptVector> node_vectors_;
};

}  // namespace reqclass
