#include "doctest.h"
#include "oracles.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <reqclass/esa.hpp>

using namespace reqclass;

namespace {

using Docs = std::vector<std::pair<std::string, std::vector<std::string>>>;

std::vector<std::string> random_terms(oracle::Rng& rng, int vocab, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len), term(0, vocab - 1);
    std::vector<std::string> out;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) out.push_back("t" + std::to_string(term(rng)));
    return out;
}

Docs random_docs(oracle::Rng& rng, int count, int vocab) {
    Docs docs;
    for (int d = 0; d < count; ++d) docs.emplace_back("d" + std::to_string(d), random_terms(rng, vocab, 30));
    return docs;
}

Eigen::VectorXd dense(const ConceptVector& v) { return v.toDense(); }

std::vector<std::vector<std::string>> bags(const Docs& docs) {
    std::vector<std::vector<std::string>> out;
    for (const auto& d : docs) out.push_back(d.second);
    return out;
}

}  // namespace

TEST_CASE("tf-idf weight of a single-document term") {
    Docs docs{{"a", {"x", "x", "y"}}, {"b", {"y"}}, {"c", {"y", "z"}}, {"d", {"y"}}};
    auto idx = build_index(docs);
    REQUIRE(idx.row("x").size() == 1);
    CHECK(idx.row("x")[0].concept_id == 0);
    CHECK(idx.row("x")[0].weight == doctest::Approx(2 * std::log(4.0)));
    CHECK(idx.row("y").empty());  // present everywhere, idf 0
    CHECK(idx.row("zzz").empty());
}

TEST_CASE("index construction rejects degenerate input") {
    Docs one{{"a", {"x"}}};
    CHECK_THROWS_AS(build_index(one), DomainError);
    CHECK_THROWS_AS(build_index(Docs{}), DomainError);
    Docs dup{{"a", {"x"}}, {"a", {"y"}}};
    CHECK_THROWS_AS(build_index(dup), DomainError);
    Docs ok{{"a", {"x"}}, {"b", {"y"}}};
    CHECK_THROWS_AS(build_index(ok, 0), DomainError);
}

TEST_CASE("concept vectors match the dense tf-idf oracle") {
    oracle::Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> nd(2, 20), nv(1, 50);
        const int vocab = nv(rng);
        auto docs = random_docs(rng, nd(rng), vocab);
        auto idx = build_index(docs);
        auto oracle_model = oracle::dense_tfidf(bags(docs));

        auto a = random_terms(rng, vocab, 20), b = random_terms(rng, vocab, 20);
        auto va = vectorize(a, idx), vb = vectorize(b, idx);
        auto oa = oracle::dense_vector(oracle_model, a), ob = oracle::dense_vector(oracle_model, b);
        REQUIRE(va.size() == oa.size());
        CHECK((dense(va) - oa).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(relatedness(va, vb) == doctest::Approx(oracle::dense_cosine(oa, ob)).epsilon(1e-9));
    }
}

TEST_CASE("vectorization is additive over term bags") {
    oracle::Rng rng(11);
    auto docs = random_docs(rng, 12, 25);
    auto idx = build_index(docs);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_terms(rng, 25, 10), b = random_terms(rng, 25, 10);
        auto ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        Eigen::VectorXd lhs = dense(vectorize(ab, idx));
        Eigen::VectorXd rhs = dense(vectorize(a, idx)) + dense(vectorize(b, idx));
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((dense(vectorize(a, idx)).array() >= 0.0).all());
    }
}

TEST_CASE("relatedness is symmetric and bounded") {
    oracle::Rng rng(12);
    auto idx = build_index(random_docs(rng, 10, 20));
    for (int trial = 0; trial < 50; ++trial) {
        auto a = vectorize(random_terms(rng, 20, 10), idx), b = vectorize(random_terms(rng, 20, 10), idx);
        const double r = relatedness(a, b);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        CHECK(r == doctest::Approx(relatedness(b, a)));
        if (a.nonZeros() > 0) CHECK(relatedness(a, a) == doctest::Approx(1.0));
    }
    CHECK(relatedness(ConceptVector(5), ConceptVector(5)) == 0.0);
}

TEST_CASE("pruning keeps the heaviest postings of each term") {
    Docs docs{{"a", {"x"}}, {"b", {"x", "x", "x"}}, {"c", {"x", "x"}}, {"d", {"y"}}};
    auto idx = build_index(docs, 2);
    const auto& row = idx.row("x");
    REQUIRE(row.size() == 2);
    CHECK(row[0].concept_id == 1);
    CHECK(row[1].concept_id == 2);
    CHECK(row[0].weight > row[1].weight);
    CHECK(idx.prune_n() == 2);
}

TEST_CASE("index cache round-trips exactly") {
    oracle::Rng rng(99);
    auto docs = random_docs(rng, 15, 40);
    auto idx = build_index(docs, 7, "en");
    std::stringstream buf;
    save_index(idx, buf);
    auto back = load_index(buf);
    CHECK(back.concepts() == idx.concepts());
    CHECK(back.prune_n() == 7);
    CHECK(back.language() == "en");
    REQUIRE(back.rows().size() == idx.rows().size());
    for (const auto& [term, row] : idx.rows()) {
        const auto& other = back.row(term);
        REQUIRE(other.size() == row.size());
        for (std::size_t i = 0; i < row.size(); ++i) {
            CHECK(other[i].concept_id == row[i].concept_id);
            CHECK(other[i].weight == row[i].weight);
        }
    }
    std::stringstream again;
    save_index(back, again);
    std::stringstream first;
    save_index(idx, first);
    CHECK(again.str() == first.str());
}

TEST_CASE("malformed caches are rejected") {
    std::istringstream empty("");
    CHECK_THROWS_AS(load_index(empty), ParseError);
    std::istringstream wrong("something else\n");
    CHECK_THROWS_AS(load_index(wrong), ParseError);
    std::istringstream version("reqclass-esa-index 2\n");
    CHECK_THROWS_AS(load_index(version), ParseError);
    std::istringstream bad_ref("reqclass-esa-index 1\nlanguage\ten\nprune_n\t5\nconcepts\t1\na\nterms\t1\nx\t1\t3:0.5\n");
    CHECK_THROWS_AS(load_index(bad_ref), ParseError);
    std::istringstream truncated("reqclass-esa-index 1\nlanguage\ten\nprune_n\t5\nconcepts\t2\na\n");
    CHECK_THROWS_AS(load_index(truncated), ParseError);
    CHECK_THROWS_AS(load_index(std::string("/nonexistent/index.esa")), ParseError);
}

TEST_CASE("min-max normalisation") {
    CHECK(min_max_normalize({}).empty());
    CHECK(min_max_normalize({0.3, 0.3}) == std::vector<double>{0.3, 0.3});
    auto n = min_max_normalize({0.2, 0.6, 0.4});
    CHECK(n[0] == 0.0);
    CHECK(n[1] == 1.0);
    CHECK(n[2] == doctest::Approx(0.5));
}

TEST_CASE("corpus directory loading") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "reqclass_test_corpus";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "beta.txt") << "Beta text";
    std::ofstream(dir / "alpha.txt") << "Alpha text";
    std::ofstream(dir / ".hidden") << "skip";
    auto docs = load_corpus(dir.string());
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "alpha");
    CHECK(docs[1].text == "Beta text");
    std::ofstream(dir / "alpha.md") << "clash";
    CHECK_THROWS_AS(load_corpus(dir.string()), ParseError);
    fs::remove_all(dir);
    CHECK_THROWS_AS(load_corpus(dir.string()), ParseError);
}

TEST_CASE("sentence classifier agrees with a dense recomputation") {
    TextPipeline p;
    std::vector<ConceptDocument> corpus{
        {"Railway", "Railway signals control trains on the track. Signals show stop or proceed."},
        {"Road", "Road traffic signs warn drivers. Signs stand beside the road."},
        {"Crossing", "A level crossing joins road and railway. Barriers close the crossing."},
        {"Lighting", "Lamps and lights illuminate platforms at night."},
        {"Bridge", "A bridge carries the track over a river."},
    };
    auto idx = build_index(corpus, p);
    auto tax = parse_taxonomy_tsv(
        "id\tparent_id\tname\tdescription\n"
        "S\t\tSignal\tRailway signals for trains\n"
        "W\t\tWarning sign\tRoad signs warning drivers\n"
        "B\t\tBarrier\tLevel crossing barriers\n"
        "L\tS\tSignal lamp\tLights of the signal\n",
        "toy");

    std::vector<std::vector<std::string>> stems;
    for (const auto& d : corpus) {
        std::vector<std::string> s;
        for (const auto& t : p.preprocess(d.text).tokens) s.push_back(t.stem);
        stems.push_back(s);
    }
    auto model = oracle::dense_tfidf(stems);
    auto dense_of = [&](const std::string& text) {
        std::vector<std::string> s;
        for (const auto& t : p.preprocess(text).tokens) s.push_back(t.stem);
        return oracle::dense_vector(model, s);
    };

    Requirement r{"R1", "Signals at the level crossing shall warn road drivers", "Doc", "Signals"};
    for (const Taxonomy& variant : {tax, aggregate_hierarchical(tax)}) {
        SentenceClassifier c(variant, idx, p, 3);
        auto raw = c.node_scores(r);
        std::vector<double> expected;
        for (std::size_t i = 0; i < variant.size(); ++i)
            expected.push_back(oracle::dense_cosine(dense_of(variant.effective_text(i)), dense_of(aggregate_requirement(r))));
        for (std::size_t i = 0; i < raw.size(); ++i) CHECK(raw[i] == doctest::Approx(expected[i]).epsilon(1e-9));

        auto lo = *std::min_element(expected.begin(), expected.end());
        auto hi = *std::max_element(expected.begin(), expected.end());
        auto out = c.classify(r);
        REQUIRE(out.labels.size() == 3);
        CHECK(out.labels[0].score == doctest::Approx(1.0));
        for (std::size_t i = 0; i < out.labels.size(); ++i) {
            const auto node = *variant.find(out.labels[i].node_id);
            CHECK(out.labels[i].score == doctest::Approx((expected[node] - lo) / (hi - lo)).epsilon(1e-9));
            if (i > 0) CHECK(out.labels[i - 1].score >= out.labels[i].score);
        }
    }
    CHECK(SentenceClassifier(tax, idx, p, 50).classify(r).labels.size() == tax.size());
    CHECK_THROWS_AS(SentenceClassifier(tax, idx, p, 0), DomainError);
}
