#include "reqclass/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "reqclass/utf8.hpp"

namespace reqclass {

namespace {

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_count(std::string_view s, long& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && out >= 0;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::vector<std::string> words, Matrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(words_.size()) != vectors_.rows())
        throw ParseError("embedding store: word count does not match vector rows");
    for (Eigen::Index i = 0; i < vectors_.rows(); ++i)
        if (!index_.emplace(words_[i], i).second) throw ParseError("duplicate embedding word '" + words_[i] + "'");
    norms_ = vectors_.rowwise().norm();
}

Eigen::Ref<const Eigen::RowVectorXf> EmbeddingStore::vector(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) throw DomainError("word '" + std::string(word) + "' not in embedding store");
    return vectors_.row(it->second);
}

std::vector<Proxy> EmbeddingStore::top_proxies(std::string_view word, std::size_t n) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end() || n == 0) return {};
    const Eigen::Index q = it->second;
    if (norms_[q] == 0.0f) return {};

    const Eigen::VectorXf dots = vectors_ * vectors_.row(q).transpose();
    std::vector<std::pair<double, Eigen::Index>> scored;
    scored.reserve(words_.size());
    for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
        if (i == q || norms_[i] == 0.0f) continue;
        double c = static_cast<double>(dots[i]) / (static_cast<double>(norms_[i]) * norms_[q]);
        scored.emplace_back(std::clamp(c, -1.0, 1.0), i);
    }
    auto better = [this](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return words_[a.second] < words_[b.second];
    };
    const auto take = std::min(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);

    std::vector<Proxy> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const auto& [c, row] = scored[i];
        out.push_back(Proxy{words_[row], std::max(c, kSimilarityFloor), c});
    }
    return out;
}

EmbeddingStore parse_embeddings(std::string_view content) {
    std::vector<std::string> words;
    std::vector<float> values;
    long dim = -1;
    long expected_rows = -1;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool first = true;
    while (pos < content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto f = fields(line);
        if (f.empty()) continue;

        long count = 0, d = 0;
        if (first && f.size() == 2 && parse_count(f[0], count) && parse_count(f[1], d)) {
            if (d == 0) throw ParseError("embeddings header declares dimension 0");
            expected_rows = count;
            dim = d;
            first = false;
            continue;
        }
        first = false;
        const long row_dim = static_cast<long>(f.size()) - 1;
        if (row_dim < 1) throw ParseError("embeddings line " + std::to_string(line_no) + ": no vector values");
        if (dim < 0) dim = row_dim;
        if (row_dim != dim)
            throw ParseError("embeddings line " + std::to_string(line_no) + ": dimension " +
                             std::to_string(row_dim) + ", expected " + std::to_string(dim));
        for (std::size_t k = 1; k < f.size(); ++k) {
            float v = 0.0f;
            auto [p, ec] = std::from_chars(f[k].data(), f[k].data() + f[k].size(), v);
            if (ec != std::errc() || p != f[k].data() + f[k].size())
                throw ParseError("embeddings line " + std::to_string(line_no) + ": unparsable value '" +
                                 std::string(f[k]) + "'");
            values.push_back(v);
        }
        words.push_back(utf8::to_lower(f[0]));
    }
    if (words.empty()) throw ParseError("embeddings file holds no vectors");
    if (expected_rows >= 0 && static_cast<long>(words.size()) != expected_rows)
        throw ParseError("embeddings header declares " + std::to_string(expected_rows) + " rows, found " +
                         std::to_string(words.size()));

    EmbeddingStore::Matrix m =
        Eigen::Map<EmbeddingStore::Matrix>(values.data(), static_cast<Eigen::Index>(words.size()), dim);
    return EmbeddingStore(std::move(words), std::move(m));
}

EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open embeddings file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_embeddings(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace reqclass
