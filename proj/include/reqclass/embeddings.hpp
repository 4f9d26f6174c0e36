#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "reqclass/linalg.hpp"

namespace reqclass {

struct Proxy {
    std::string word;
    double similarity = 0.0;  // cosine clamped to [kSimilarityFloor, 1]
    double cosine = 0.0;      // raw value
};

inline constexpr double kSimilarityFloor = 1e-9;

/// Word vectors, one row per word. Immutable after load.
class EmbeddingStore {
public:
    using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    EmbeddingStore() = default;
    /// Throws ParseError on a duplicate word or a row count mismatch.
    EmbeddingStore(std::vector<std::string> words, Matrix vectors);

    Eigen::Index dimension() const { return vectors_.cols(); }
    std::size_t size() const { return words_.size(); }
    bool contains(std::string_view word) const { return index_.count(std::string(word)) > 0; }
    const std::vector<std::string>& words() const { return words_; }

    /// Row for `word`; throws DomainError if absent.
    Eigen::Ref<const Eigen::RowVectorXf> vector(std::string_view word) const;

    /// Up to n nearest words by cosine, query excluded. Ties break on word order.
    /// Out-of-vocabulary or zero-vector queries yield an empty list.
    std::vector<Proxy> top_proxies(std::string_view word, std::size_t n = 10) const;

private:
    std::vector<std::string> words_;
    Matrix vectors_;
    Eigen::VectorXf norms_;
    std::unordered_map<std::string, Eigen::Index> index_;
};

/// Textual word-vector format: optional "count dim" header, then `word f1 ... fdim`.
/// Words are lowercased. Malformed lines are errors.
EmbeddingStore parse_embeddings(std::string_view content);
EmbeddingStore load_embeddings(const std::string& path);

}  // namespace reqclass
