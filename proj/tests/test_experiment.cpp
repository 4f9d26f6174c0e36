#include "doctest.h"

#include <fstream>
#include <sstream>

#include <reqclass/experiment.hpp>

using namespace reqclass;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kPublished = std::string(REQCLASS_SOURCE_DIR) + "/data/published/";

struct Toy {
    std::vector<Requirement> requirements{
        {"R1", "Signal lamps shall be visible from the track", "Signals", "Lamps"},
        {"R2", "Barriers shall close the level crossing", "Crossings", ""},
        {"R3", "Road signs shall warn drivers", "", ""},
    };
    std::vector<Taxonomy> taxonomies{
        parse_taxonomy_tsv("id\tparent_id\tname\tdescription\n"
                           "S\t\tSignal\tRailway signal\n"
                           "SL\tS\tSignal lamp\tLamp of a signal\n"
                           "C\t\tCrossing\tLevel crossing\n"
                           "CB\tC\tBarrier\tCrossing barrier\n",
                           "X"),
        parse_taxonomy_tsv("id\tparent_id\tname\tdescription\n"
                           "W\t\tWarning sign\tRoad sign warning drivers\n"
                           "T\t\tTrack\tRailway track\n",
                           "Y"),
    };
    std::vector<GroundTruth> truths = parse_ground_truth(R"([
        {"requirement_id":"R1","output_space_id":"X","labels":["SL"]},
        {"requirement_id":"R2","output_space_id":"X","labels":["CB","C"]},
        {"requirement_id":"R3","output_space_id":"Y","labels":["W"]},
        {"requirement_id":"R1","output_space_id":"Y","labels":["T"]}
    ])");
    EmbeddingStore store = parse_embeddings("signal 1 0 0\nlamp 0.9 0.1 0\nbarrier 0 1 0\ncrossing 0.1 0.9 0\n"
                                            "road 0 0 1\nsign 0.1 0 0.9\ntrack 0.5 0.5 0\n");
    TextPipeline pipeline;
    std::vector<ConceptDocument> corpus{
        {"signals", "Signal lamps show aspects to train drivers on the railway track."},
        {"crossings", "A level crossing has barriers that close before a train passes."},
        {"roads", "Road signs warn drivers about hazards on the road."},
        {"tracks", "The railway track has rails and sleepers."},
    };
    ConceptIndex index = build_index(corpus, pipeline);

    ExperimentInputs inputs() const { return {&requirements, &taxonomies, &truths, &store, &index, &pipeline}; }
};

std::vector<ExperimentCell> published_cells() { return parse_results_tsv(read_file(kPublished + "results.tsv")); }

}  // namespace

TEST_CASE("two output spaces give an eight-cell factorial in fixed order") {
    Toy toy;
    auto cells = run_factorial(toy.inputs(), {});
    REQUIRE(cells.size() == 8);
    const ClassifierKind kinds[] = {ClassifierKind::Word, ClassifierKind::Sentence};
    const Strategy strategies[] = {Strategy::Flat, Strategy::Hierarchical};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].output_space == (i < 4 ? "X" : "Y"));
        CHECK(cells[i].classifier == kinds[i % 2]);
        CHECK(cells[i].strategy == strategies[(i / 2) % 2]);
        CHECK(cells[i].metrics.documents == 2);
    }
}

TEST_CASE("cell metrics equal a hand-composed pipeline") {
    Toy toy;
    ExperimentConfig config;
    config.k = 2;
    std::vector<CellPredictions> preds;
    auto cells = run_factorial(toy.inputs(), config, &preds);
    REQUIRE(preds.size() == cells.size());

    std::size_t c = 0;
    for (std::size_t s = 0; s < toy.taxonomies.size(); ++s) {
        const auto& flat = toy.taxonomies[s];
        const auto& truth = toy.truths[s];
        for (const Taxonomy& space : {flat, aggregate_hierarchical(flat)}) {
            WordClassifierOptions wo;
            wo.k = 2;
            WordClassifier word(space, toy.store, toy.pipeline, wo);
            SentenceClassifier sentence(space, toy.index, toy.pipeline, 2);
            for (int kind = 0; kind < 2; ++kind, ++c) {
                std::size_t tp = 0, predicted = 0, relevant = 0;
                for (const auto& [req_id, labels] : truth.entries) {
                    const auto& r = *std::find_if(toy.requirements.begin(), toy.requirements.end(),
                                                  [&](const Requirement& x) { return x.id == req_id; });
                    auto out = kind == 0 ? word.classify(r) : sentence.classify(r);
                    for (const auto& l : out.labels) tp += labels.count(l.node_id);
                    predicted += out.labels.size();
                    relevant += labels.size();
                    CHECK(out.labels.size() <= 2);
                }
                CAPTURE(c);
                CHECK(cells[c].metrics.totals.tp == tp);
                CHECK(cells[c].metrics.totals.tp + cells[c].metrics.totals.fp == predicted);
                CHECK(cells[c].metrics.totals.tp + cells[c].metrics.totals.fn == relevant);
                if (predicted) CHECK(cells[c].metrics.precision == doctest::Approx(double(tp) / predicted));
            }
        }
    }
}

TEST_CASE("k = 1 keeps at most one label per requirement") {
    Toy toy;
    ExperimentConfig config;
    config.k = 1;
    std::vector<CellPredictions> preds;
    run_factorial(toy.inputs(), config, &preds);
    for (const auto& cell : preds)
        for (const auto& p : cell.predictions) CHECK(p.labels.size() <= 1);
    config.k = 0;
    CHECK_THROWS_AS(run_factorial(toy.inputs(), config), DomainError);
}

TEST_CASE("factorial input errors name the culprit") {
    {
        Toy toy;
        toy.truths.pop_back();
        CHECK_THROWS_WITH_AS(run_factorial(toy.inputs(), {}), doctest::Contains("'Y'"), DomainError);
    }
    {
        Toy toy;
        toy.taxonomies.pop_back();
        CHECK_THROWS_WITH_AS(run_factorial(toy.inputs(), {}), doctest::Contains("missing taxonomy"), DomainError);
    }
    {
        Toy toy;
        toy.requirements.pop_back();
        CHECK_THROWS_WITH_AS(run_factorial(toy.inputs(), {}), doctest::Contains("R3"), DomainError);
    }
    {
        Toy toy;
        toy.taxonomies.push_back(toy.taxonomies.front());
        CHECK_THROWS_AS(run_factorial(toy.inputs(), {}), DomainError);
    }
    {
        Toy toy;
        toy.truths[0].entries["R1"].insert("nope");
        CHECK_THROWS_AS(run_factorial(toy.inputs(), {}), DomainError);
    }
}

TEST_CASE("analysis of the published results table") {
    auto cells = published_cells();
    REQUIRE(cells.size() == 24);
    auto table = parse_characteristics_tsv(read_file(kPublished + "characteristics.tsv"));
    auto a = analyze(cells, table);

    REQUIRE(a.rq1.recall.result);
    CHECK(a.rq1.recall.result->t_plus == 0);
    CHECK(a.rq1.recall.result->t_minus == 78);
    CHECK(a.rq1.recall.result->w == 0);
    CHECK(*a.rq1.recall.result->critical_value == 13);
    CHECK(a.rq1.recall.result->significant);

    REQUIRE(a.rq2.f1.result);
    CHECK(a.rq2.f1.result->t_minus == 12);
    CHECK(a.rq2.f1.result->t_plus == 24);
    CHECK(a.rq2.f1.result->n == 8);
    CHECK_FALSE(a.rq2.f1.result->significant);

    REQUIRE(a.rq3.size() == 15);
    for (const auto& c : a.rq3) {
        REQUIRE(c.test.result);
        if ((c.characteristic == "total_nodes" || c.characteristic == "leaf_nodes") && c.metric == "recall")
            CHECK(c.test.result->rho == doctest::Approx(-0.8827348295047495).epsilon(1e-9));
    }
}

TEST_CASE("identical metrics leave every paired test without data") {
    auto cells = published_cells();
    for (auto& c : cells) c.metrics.recall = c.metrics.precision = c.metrics.f1 = 0.25;
    auto a = analyze(cells, parse_characteristics_tsv(read_file(kPublished + "characteristics.tsv")));
    for (const auto* o : {&a.rq1.recall, &a.rq1.precision, &a.rq1.f1, &a.rq2.recall, &a.rq2.precision, &a.rq2.f1}) {
        CHECK_FALSE(o->result.has_value());
        CHECK_FALSE(o->error.empty());
    }
    for (const auto& c : a.rq3) CHECK_FALSE(c.test.result.has_value());
    CHECK(analysis_to_json(a).find("\"error\"") != std::string::npos);
}

TEST_CASE("analysis rejects an incomplete or duplicated factorial") {
    auto cells = published_cells();
    auto table = parse_characteristics_tsv(read_file(kPublished + "characteristics.tsv"));
    auto missing = cells;
    missing.pop_back();
    CHECK_THROWS_AS(analyze(missing, table), DomainError);
    auto dup = cells;
    dup.push_back(cells.front());
    CHECK_THROWS_AS(analyze(dup, table), DomainError);
    CHECK_THROWS_AS(analyze({}, table), DomainError);

    table.erase("OS_A");
    auto a = analyze(cells, table);
    CHECK_FALSE(a.rq3.front().test.result.has_value());
    CHECK(a.rq3.front().test.error.find("OS_A") != std::string::npos);
}

TEST_CASE("report formats round-trip") {
    auto cells = published_cells();
    std::ostringstream out;
    write_results_tsv(cells, out);
    CHECK(out.str() == read_file(kPublished + "results.tsv"));

    auto table = parse_characteristics_tsv(read_file(kPublished + "characteristics.tsv"));
    std::vector<std::pair<std::string, TaxonomyCharacteristics>> rows(table.begin(), table.end());
    std::ostringstream ch;
    write_characteristics_tsv(rows, ch);
    auto back = parse_characteristics_tsv(ch.str());
    CHECK(back.at("OS_B").total_nodes == 1183);
    CHECK(back.at("OS_L").categories == 0);

    std::ostringstream corr;
    write_correlation_tsv(cells, table, corr);
    CHECK(corr.str().find("OS_T\t79\t4\t80\t170\t250\t0.66\t0.06\t0.11") != std::string::npos);

    std::vector<RankedLabels> preds{{"R1", {{"A", 0.5}, {"B", 0.25}}}, {"R2", {}}};
    std::ostringstream jl;
    write_predictions_jsonl(preds, jl);
    auto parsed = parse_predictions_jsonl(jl.str());
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].labels == preds[0].labels);
    CHECK(parsed[1].labels.empty());

    CHECK_THROWS_AS(parse_results_tsv("bad header\n"), ParseError);
    CHECK_THROWS_AS(parse_results_tsv("classifier\tstrategy\tos\trecall\tprecision\tf1\nword\tflat\tA\tx\t0\t0\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_results_tsv("classifier\tstrategy\tos\trecall\tprecision\tf1\nbogus\tflat\tA\t0\t0\t0\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_characteristics_tsv("output_space\tdescription_length\tdepth\tcategories\tleaf_nodes\t"
                                              "total_nodes\nA\t1\t1\t1\t1\t5\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_predictions_jsonl("{\"labels\":[]}\n"), ParseError);
}

TEST_CASE("analysis report is deterministic and versioned") {
    auto cells = published_cells();
    auto table = parse_characteristics_tsv(read_file(kPublished + "characteristics.tsv"));
    auto a = analysis_to_json(analyze(cells, table));
    CHECK(a == analysis_to_json(analyze(cells, table)));
    CHECK(a.find("\"format\": \"reqclass-analysis\"") != std::string::npos);
    CHECK(a.find("\"version\": 1") != std::string::npos);
}

TEST_CASE("sha-256 digest") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("factor level names") {
    CHECK(parse_classifier("word") == ClassifierKind::Word);
    CHECK(parse_classifier("sentence-based") == ClassifierKind::Sentence);
    CHECK(parse_strategy("hier") == Strategy::Hierarchical);
    CHECK(to_string(Strategy::Flat) == "flat");
    CHECK_THROWS_AS(parse_strategy("deep"), ParseError);
}
