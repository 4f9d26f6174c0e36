#include "reqclass/esa.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "reqclass/linalg.hpp"

namespace reqclass {

namespace {

constexpr std::string_view kCacheMagic = "reqclass-esa-index";
constexpr int kCacheVersion = 1;

const std::vector<ConceptPosting> kNoPostings;

}  // namespace

ConceptIndex::ConceptIndex(std::vector<std::string> concepts, Rows rows, std::size_t prune_n, std::string language)
    : concepts_(std::move(concepts)), rows_(std::move(rows)), prune_n_(prune_n), language_(std::move(language)) {}

const std::vector<ConceptPosting>& ConceptIndex::row(const std::string& term) const {
    auto it = rows_.find(term);
    return it == rows_.end() ? kNoPostings : it->second;
}

ConceptIndex build_index(std::span<const std::pair<std::string, std::vector<std::string>>> documents,
                         std::size_t prune_n, std::string language) {
    if (documents.empty()) throw DomainError("cannot build a concept index from an empty corpus");
    if (documents.size() < 2) throw DomainError("concept corpus needs at least 2 documents (idf is degenerate)");
    if (prune_n == 0) throw DomainError("prune_n must be at least 1");

    std::vector<std::string> concepts;
    concepts.reserve(documents.size());
    std::map<std::string, std::vector<std::pair<Eigen::Index, std::size_t>>> term_counts;
    for (std::size_t d = 0; d < documents.size(); ++d) {
        const auto& [id, terms] = documents[d];
        if (std::find(concepts.begin(), concepts.end(), id) != concepts.end())
            throw DomainError("duplicate concept id '" + id + "'");
        concepts.push_back(id);
        std::map<std::string, std::size_t> counts;
        for (const auto& t : terms) ++counts[t];
        for (const auto& [t, c] : counts) term_counts[t].emplace_back(static_cast<Eigen::Index>(d), c);
    }

    const double D = static_cast<double>(documents.size());
    ConceptIndex::Rows rows;
    for (auto& [term, postings] : term_counts) {
        const double idf = std::log(D / static_cast<double>(postings.size()));
        if (idf <= 0.0) continue;
        std::vector<ConceptPosting> row;
        row.reserve(postings.size());
        for (const auto& [concept_id, tf] : postings) row.push_back({concept_id, static_cast<double>(tf) * idf});
        std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.weight > b.weight; });
        if (row.size() > prune_n) row.resize(prune_n);
        rows.emplace(term, std::move(row));
    }
    return ConceptIndex(std::move(concepts), std::move(rows), prune_n, std::move(language));
}

ConceptIndex build_index(std::span<const ConceptDocument> corpus, const TextPipeline& pipeline, std::size_t prune_n) {
    std::vector<std::pair<std::string, std::vector<std::string>>> docs;
    docs.reserve(corpus.size());
    for (const auto& doc : corpus) {
        std::vector<std::string> terms;
        for (auto& tok : pipeline.preprocess(doc.text, doc.id).tokens) terms.push_back(std::move(tok.stem));
        docs.emplace_back(doc.id, std::move(terms));
    }
    return build_index(docs, prune_n, pipeline.language());
}

std::vector<ConceptDocument> load_corpus(const std::string& directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw ParseError("corpus directory '" + directory + "' does not exist");
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        auto name = entry.path().filename().string();
        if (name.empty() || name[0] == '.') continue;
        auto id = entry.path().stem().string();
        if (!files.emplace(id, entry.path()).second)
            throw ParseError("corpus directory holds two files for concept '" + id + "'");
    }
    std::vector<ConceptDocument> out;
    out.reserve(files.size());
    for (const auto& [id, path] : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError("cannot read corpus file '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        out.push_back({id, ss.str()});
    }
    return out;
}

ConceptVector vectorize(std::span<const std::string> terms, const ConceptIndex& index) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : terms) ++counts[t];
    std::map<Eigen::Index, double> acc;
    for (const auto& [term, count] : counts)
        for (const auto& p : index.row(term)) acc[p.concept_id] += static_cast<double>(count) * p.weight;

    ConceptVector v(index.dimension());
    v.reserve(static_cast<Eigen::Index>(acc.size()));
    for (const auto& [c, w] : acc)
        if (w != 0.0) v.insert(c) = w;
    return v;
}

ConceptVector vectorize(std::string_view text, const ConceptIndex& index, const TextPipeline& pipeline) {
    std::vector<std::string> terms;
    for (auto& tok : pipeline.preprocess(text).tokens) terms.push_back(std::move(tok.stem));
    return vectorize(terms, index);
}

double relatedness(const ConceptVector& a, const ConceptVector& b) {
    return std::clamp(sparse_cosine(a, b), 0.0, 1.0);
}

std::vector<double> min_max_normalize(std::vector<double> scores) {
    if (scores.empty()) return scores;
    auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double min = *lo, range = *hi - *lo;
    if (range <= 0.0) return scores;
    for (auto& s : scores) s = (s - min) / range;
    return scores;
}

void save_index(const ConceptIndex& index, std::ostream& out) {
    out << kCacheMagic << ' ' << kCacheVersion << '\n';
    out << "language\t" << index.language() << '\n';
    out << "prune_n\t" << index.prune_n() << '\n';
    out << "concepts\t" << index.concepts().size() << '\n';
    for (const auto& c : index.concepts()) out << c << '\n';

    std::vector<const std::string*> terms;
    terms.reserve(index.rows().size());
    for (const auto& [t, row] : index.rows()) terms.push_back(&t);
    std::sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) { return *a < *b; });
    out << "terms\t" << terms.size() << '\n';
    out << std::setprecision(17);
    for (const auto* t : terms) {
        const auto& row = index.row(*t);
        out << *t << '\t' << row.size();
        for (const auto& p : row) out << '\t' << p.concept_id << ':' << p.weight;
        out << '\n';
    }
}

namespace {

ConceptIndex read_index(std::istream& in) {
    auto fail = [](const std::string& what) -> ParseError { return ParseError("ESA index cache: " + what); };
    std::string line;
    if (!std::getline(in, line)) throw fail("empty file");
    {
        std::istringstream head(line);
        std::string magic;
        int version = 0;
        if (!(head >> magic >> version) || magic != kCacheMagic) throw fail("not an index cache");
        if (version != kCacheVersion) throw fail("unsupported version " + std::to_string(version));
    }
    auto keyed = [&](const char* key) {
        if (!std::getline(in, line)) throw fail(std::string("missing '") + key + "' line");
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.substr(0, tab) != key) throw fail(std::string("expected '") + key + "'");
        return line.substr(tab + 1);
    };
    auto language = keyed("language");
    std::size_t prune_n = std::stoul(keyed("prune_n"));
    std::size_t n_concepts = std::stoul(keyed("concepts"));
    std::vector<std::string> concepts(n_concepts);
    for (auto& c : concepts)
        if (!std::getline(in, c)) throw fail("truncated concept list");
    std::size_t n_terms = std::stoul(keyed("terms"));
    ConceptIndex::Rows rows;
    rows.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i) {
        if (!std::getline(in, line)) throw fail("truncated term rows");
        std::istringstream fields(line);
        std::string term, count;
        std::getline(fields, term, '\t');
        std::getline(fields, count, '\t');
        std::vector<ConceptPosting> row;
        std::string posting;
        while (std::getline(fields, posting, '\t')) {
            auto colon = posting.find(':');
            if (colon == std::string::npos) throw fail("bad posting in row '" + term + "'");
            ConceptPosting p{static_cast<Eigen::Index>(std::stol(posting.substr(0, colon))),
                             std::stod(posting.substr(colon + 1))};
            if (p.concept_id < 0 || static_cast<std::size_t>(p.concept_id) >= n_concepts)
                throw fail("posting refers to unknown concept in row '" + term + "'");
            row.push_back(p);
        }
        if (count.empty() || row.size() != std::stoul(count)) throw fail("row length mismatch for '" + term + "'");
        rows.emplace(std::move(term), std::move(row));
    }
    return ConceptIndex(std::move(concepts), std::move(rows), prune_n, std::move(language));
}

}  // namespace

ConceptIndex load_index(std::istream& in) {
    try {
        return read_index(in);
    } catch (const std::invalid_argument&) {
        throw ParseError("ESA index cache: malformed number");
    } catch (const std::out_of_range&) {
        throw ParseError("ESA index cache: number out of range");
    }
}

void save_index(const ConceptIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write ESA index '" + path + "'");
    save_index(index, out);
}

ConceptIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open ESA index '" + path + "'");
    try {
        return load_index(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

SentenceClassifier::SentenceClassifier(const Taxonomy& taxonomy, const ConceptIndex& index,
                                       const TextPipeline& pipeline, std::size_t k)
    : taxonomy_(&taxonomy), index_(&index), pipeline_(&pipeline), k_(k) {
    if (k_ == 0) throw DomainError("label budget k must be at least 1");
    node_vectors_.reserve(taxonomy.size());
    for (std::size_t i = 0; i < taxonomy.size(); ++i)
        node_vectors_.push_back(vectorize(taxonomy.effective_text(i), index, pipeline));
}

std::vector<double> SentenceClassifier::node_scores(const Requirement& r) const {
    const auto rv = vectorize(aggregate_requirement(r), *index_, *pipeline_);
    std::vector<double> scores;
    scores.reserve(node_vectors_.size());
    for (const auto& nv : node_vectors_) scores.push_back(relatedness(nv, rv));
    return scores;
}

RankedLabels SentenceClassifier::classify(const Requirement& r) const {
    const auto raw = node_scores(r);
    const auto normalized = min_max_normalize(raw);

    std::vector<std::size_t> order(raw.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto take = std::min(k_, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (raw[a] != raw[b]) return raw[a] > raw[b];
                          return taxonomy_->node(a).id < taxonomy_->node(b).id;
                      });

    RankedLabels out{r.id, {}};
    out.labels.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.labels.push_back({taxonomy_->node(order[i]).id, normalized[order[i]]});
    return out;
}

}  // namespace reqclass
