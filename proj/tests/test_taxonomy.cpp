#include "doctest.h"
#include "oracles.hpp"

#include <reqclass/taxonomy.hpp>

using namespace reqclass;

namespace {

const char* kSmall =
    "id\tparent_id\tname\tdescription\tsynonyms\n"
    "# signals and signs\n"
    "S\t\tSignal\tA railway signal\tlight|lamp\n"
    "S1\tS\tMain signal\t\t\n"
    "S2\tS\tDistant signal\tWarns ahead\n"
    "S11\tS1\tEntry signal\n"
    "R\t\tRoad\n";

Taxonomy synthetic_tree(const oracle::RandomTree& t) {
    std::vector<TaxonNode> nodes;
    for (std::size_t i = 0; i < t.parent.size(); ++i) {
        TaxonNode n;
        n.id = "n" + std::to_string(i);
        if (t.parent[i] >= 0) n.parent_id = "n" + std::to_string(t.parent[i]);
        n.name = "w" + std::to_string(i);
        nodes.push_back(n);
    }
    return Taxonomy("rand", nodes);
}

}  // namespace

TEST_CASE("delimited taxonomy parses structure and text") {
    auto t = parse_taxonomy_tsv(kSmall, "small");
    CHECK(t.id() == "small");
    REQUIRE(t.size() == 5);
    CHECK(t.roots().size() == 2);
    CHECK(t.level(*t.find("S11")) == 3);
    CHECK(t.node(0).synonyms == std::vector<std::string>{"light", "lamp"});
    CHECK(t.node(0).own_text() == "Signal A railway signal light lamp");
    CHECK(t.node(3).own_text() == "Entry signal");
    CHECK(t.children(0) == std::vector<std::size_t>{1, 2});
    CHECK_FALSE(t.aggregated());
}

TEST_CASE("structured taxonomy accepts object and bare array") {
    auto a = parse_taxonomy_json(R"({"id":"X","nodes":[{"id":"a","name":"Alpha","synonyms":["one","two"]},
                                     {"id":"b","parent_id":"a","name":"Beta","synonyms":"x|y"}]})",
                                 "fallback");
    CHECK(a.id() == "X");
    CHECK(a.node(1).synonyms == std::vector<std::string>{"x", "y"});
    auto b = parse_taxonomy_json(R"([{"id":"a","name":"Alpha"}])", "fb");
    CHECK(b.id() == "fb");
    CHECK(b.size() == 1);
}

TEST_CASE("malformed taxonomies are rejected") {
    const std::string header = "id\tparent_id\tname\tdescription\tsynonyms\n";
    CHECK_THROWS_AS(parse_taxonomy_tsv("nonsense\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_tsv(header + "a\t\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_tsv(header + "a\t\tA\nb\tzz\tB\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_tsv(header + "a\t\tA\na\t\tB\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_tsv(header + "a\ta\tA\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_tsv(header + "a\tb\tA\nb\ta\tB\n", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_json("{", "x"), ParseError);
    CHECK_THROWS_AS(parse_taxonomy_json(R"([{"name":"no id"}])", "x"), ParseError);

    try {
        parse_taxonomy_tsv(header + "a\t\tA\nb\tmissing\tB\n", "x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
}

TEST_CASE("characteristics of a small taxonomy") {
    auto c = characteristics(parse_taxonomy_tsv(kSmall, "small"));
    CHECK(c.total_nodes == 5);
    CHECK(c.leaf_nodes == 3);
    CHECK(c.categories == 2);
    CHECK(c.depth == 3);
    // Code points of name + description + synonyms, no separators.
    const double lengths = (6 + 16 + 5 + 4) + 11 + (14 + 11) + 12 + 4;
    CHECK(c.description_length == doctest::Approx(lengths / 5));
}

TEST_CASE("flat taxonomy has depth one and no categories") {
    auto t = parse_taxonomy_tsv("id\tparent_id\tname\na\t\tÅsa\nb\t\tBo\n", "flat");
    auto c = characteristics(t);
    CHECK(c.depth == 1);
    CHECK(c.categories == 0);
    CHECK(c.leaf_nodes == 2);
    CHECK(c.description_length == doctest::Approx(2.5));  // Å is one code point
}

TEST_CASE("hierarchical aggregation includes exactly the subtree") {
    auto t = aggregate_hierarchical(parse_taxonomy_tsv(kSmall, "small"));
    CHECK(t.aggregated());
    CHECK(t.effective_text(*t.find("S")) ==
          "Signal A railway signal light lamp Main signal Entry signal Distant signal Warns ahead");
    CHECK(t.effective_text(*t.find("S11")) == "Entry signal");
    CHECK(t.effective_text(*t.find("R")) == "Road");
}

TEST_CASE("aggregation matches the ancestor-walk oracle on random trees") {
    oracle::Rng rng(20240611);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> size(1, 50);
        auto tree = oracle::random_tree(rng, size(rng));
        auto agg = aggregate_hierarchical(synthetic_tree(tree));
        const int n = static_cast<int>(tree.parent.size());
        for (int a = 0; a < n; ++a) {
            const auto& text = agg.effective_text(static_cast<std::size_t>(a));
            for (int x = 0; x < n; ++x) {
                const std::size_t expected = oracle::is_descendant_or_self(tree, x, a) ? 1 : 0;
                REQUIRE(oracle::count_word(text, "w" + std::to_string(x)) == expected);
            }
        }
    }
}

TEST_CASE("aggregation is idempotent and keeps the structure") {
    oracle::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto base = synthetic_tree(oracle::random_tree(rng, 30));
        auto once = aggregate_hierarchical(base);
        auto twice = aggregate_hierarchical(once);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(once.effective_text(i) == twice.effective_text(i));
            CHECK(once.level(i) == base.level(i));
            CHECK(once.node(i).own_text() == base.node(i).own_text());
        }
        auto cb = characteristics(base), ca = characteristics(once);
        CHECK(cb.total_nodes == ca.total_nodes);
        CHECK(cb.depth == ca.depth);
        CHECK(cb.description_length == ca.description_length);
    }
}

TEST_CASE("leaf and category counts partition the nodes") {
    oracle::Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        auto tree = oracle::random_tree(rng, 1 + trial);
        auto c = characteristics(synthetic_tree(tree));
        CHECK(c.leaf_nodes + c.categories == c.total_nodes);
        int depth = 0;
        for (std::size_t i = 0; i < tree.parent.size(); ++i) {
            int d = 0;
            for (int cur = static_cast<int>(i); cur != -1; cur = tree.parent[static_cast<std::size_t>(cur)]) ++d;
            depth = std::max(depth, d);
        }
        CHECK(c.depth == depth);
    }
}
