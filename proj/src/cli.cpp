#include "reqclass/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reqclass/embeddings.hpp"
#include "reqclass/esa.hpp"
#include "reqclass/evaluation.hpp"
#include "reqclass/experiment.hpp"
#include "reqclass/taxonomy.hpp"
#include "reqclass/textproc.hpp"
#include "reqclass/word_classifier.hpp"

namespace reqclass {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::size_t k = 15;
    std::string classifier = "sentence";
    std::string strategy = "flat";
    std::string language = "en";
    std::size_t prune_n = kDefaultPruneN;
    std::size_t proxies = 10;
    std::string cosine_mode = "verbatim";
    std::string proxy_agg = "sum";
    std::vector<std::string> taxonomies;
    std::string embeddings;
    std::string corpus;
    std::string requirements;
    std::string truth;
    std::string out;
    std::string stop_words;
    std::string pos_sidecar;
    std::string predictions;
    std::string results;
    std::string characteristics;
};

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

/// Writes to --out when given, otherwise to the data stream.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& content) {
    if (cfg.out.empty())
        out << content;
    else
        write_file(cfg.out, content);
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
    return PipelineOptions{cfg.language, cfg.stop_words, cfg.pos_sidecar};
}

WordClassifierOptions word_options(const RunConfig& cfg) {
    WordClassifierOptions o;
    o.k = cfg.k;
    o.proxy_count = cfg.proxies;
    o.cosine_placement = cfg.cosine_mode == "numerator" ? CosinePlacement::Numerator : CosinePlacement::Denominator;
    o.proxy_aggregation = cfg.proxy_agg == "max" ? ProxyAggregation::Max : ProxyAggregation::Sum;
    return o;
}

/// --corpus names either a directory of concept documents or a cached index file.
ConceptIndex obtain_index(const RunConfig& cfg, const TextPipeline& pipeline) {
    if (cfg.corpus.empty()) throw DomainError("--corpus is required for the sentence-based classifier");
    if (fs::is_directory(cfg.corpus)) return build_index(load_corpus(cfg.corpus), pipeline, cfg.prune_n);
    auto index = load_index(cfg.corpus);
    if (!index.language().empty() && index.language() != pipeline.language())
        throw DomainError("index '" + cfg.corpus + "' was built for language '" + index.language() +
                          "', but --lang is '" + pipeline.language() + "'");
    return index;
}

std::string hash_path(const std::string& path) {
    if (fs::is_directory(path)) {
        std::map<std::string, std::string> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file()) files.emplace(e.path().filename().string(), read_all(e.path().string()));
        std::string blob;
        for (const auto& [name, content] : files) blob += sha256_hex(name) + sha256_hex(content);
        return sha256_hex(blob);
    }
    return sha256_hex(read_all(path));
}

std::string timestamp_utc() {
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch)
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_taxonomy_stats(const RunConfig& cfg, std::ostream& out) {
    std::vector<std::pair<std::string, TaxonomyCharacteristics>> rows;
    for (const auto& path : cfg.taxonomies) {
        auto t = load_taxonomy(path);
        rows.emplace_back(t.id(), characteristics(t));
    }
    std::ostringstream ss;
    write_characteristics_tsv(rows, ss);
    emit(cfg, out, ss.str());
    return 0;
}

int cmd_build_index(const RunConfig& cfg, std::ostream& err) {
    if (cfg.corpus.empty() || cfg.out.empty()) throw DomainError("build-index needs --corpus DIR and --out FILE");
    if (!fs::is_directory(cfg.corpus)) throw DomainError("--corpus must be a directory for build-index");
    TextPipeline pipeline(pipeline_options(cfg));
    auto index = build_index(load_corpus(cfg.corpus), pipeline, cfg.prune_n);
    save_index(index, cfg.out);
    err << "indexed " << index.concepts().size() << " concepts, " << index.rows().size() << " terms\n";
    return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    if (cfg.taxonomies.size() != 1) throw DomainError("classify needs exactly one --taxonomy");
    if (cfg.requirements.empty()) throw DomainError("classify needs --requirements");
    const auto kind = parse_classifier(cfg.classifier);
    const auto strategy = parse_strategy(cfg.strategy);
    const auto requirements = load_requirements(cfg.requirements);

    std::ostringstream ss;
    if (!requirements.empty()) {
        const TextPipeline pipeline(pipeline_options(cfg));
        auto flat = load_taxonomy(cfg.taxonomies.front());
        const Taxonomy space = strategy == Strategy::Flat ? std::move(flat) : aggregate_hierarchical(flat);
        std::vector<RankedLabels> ranked;
        ranked.reserve(requirements.size());
        if (kind == ClassifierKind::Word) {
            if (cfg.embeddings.empty()) throw DomainError("--embeddings is required for the word-based classifier");
            const auto store = load_embeddings(cfg.embeddings);
            const WordClassifier classifier(space, store, pipeline, word_options(cfg));
            for (const auto& r : requirements) ranked.push_back(classifier.classify(r));
        } else {
            const auto index = obtain_index(cfg, pipeline);
            const SentenceClassifier classifier(space, index, pipeline, cfg.k);
            for (const auto& r : requirements) ranked.push_back(classifier.classify(r));
        }
        write_predictions_jsonl(ranked, ss);
    }
    emit(cfg, out, ss.str());
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.predictions.empty() || cfg.truth.empty() || cfg.taxonomies.size() != 1)
        throw DomainError("evaluate needs --predictions, --truth and exactly one --taxonomy");
    const auto space = load_taxonomy(cfg.taxonomies.front());
    const auto predictions = parse_predictions_jsonl(read_all(cfg.predictions));
    const auto truths = load_ground_truth(cfg.truth);
    auto it = std::find_if(truths.begin(), truths.end(),
                           [&](const GroundTruth& g) { return g.output_space_id == space.id(); });
    if (it == truths.end()) throw DomainError("no ground truth sample for output space '" + space.id() + "'");
    if (it->excluded_no_code) err << "excluded " << it->excluded_no_code << " 'No Available Code' labels\n";

    std::map<std::string, const RankedLabels*> by_id;
    for (const auto& p : predictions) by_id.emplace(p.requirement_id, &p);
    std::vector<Confusion> counts;
    const RankedLabels none;
    for (const auto& [req, labels] : it->entries) {
        auto p = by_id.find(req);
        if (p == by_id.end()) err << "warning: no prediction for requirement '" << req << "'\n";
        counts.push_back(confusion_counts(p == by_id.end() ? none : *p->second, labels, space));
    }
    ExperimentCell cell{parse_classifier(cfg.classifier), parse_strategy(cfg.strategy), space.id(), micro_metrics(counts)};
    std::ostringstream ss;
    write_results_tsv({cell}, ss);
    emit(cfg, out, ss.str());
    return 0;
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["k"] = cfg.k;
    j["language"] = cfg.language;
    j["prune_n"] = cfg.prune_n;
    j["proxies"] = cfg.proxies;
    j["cosine_mode"] = cfg.cosine_mode;
    j["proxy_agg"] = cfg.proxy_agg;
    j["stop_words"] = cfg.stop_words;
    j["pos_sidecar"] = cfg.pos_sidecar;
    return j;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& err) {
    if (cfg.taxonomies.empty() || cfg.requirements.empty() || cfg.truth.empty() || cfg.embeddings.empty() ||
        cfg.corpus.empty() || cfg.out.empty())
        throw DomainError("experiment needs --taxonomy (repeatable), --requirements, --truth, --embeddings, --corpus and --out");

    const TextPipeline pipeline(pipeline_options(cfg));
    std::vector<Taxonomy> taxonomies;
    CharacteristicsTable table;
    std::vector<std::pair<std::string, TaxonomyCharacteristics>> rows;
    for (const auto& path : cfg.taxonomies) {
        taxonomies.push_back(load_taxonomy(path));
        auto ch = characteristics(taxonomies.back());
        table.emplace(taxonomies.back().id(), ch);
        rows.emplace_back(taxonomies.back().id(), ch);
    }
    const auto requirements = load_requirements(cfg.requirements);
    const auto truths = load_ground_truth(cfg.truth);
    for (const auto& g : truths)
        if (g.excluded_no_code)
            err << "sample '" << g.sample_id << "': excluded " << g.excluded_no_code << " 'No Available Code' labels\n";
    const auto store = load_embeddings(cfg.embeddings);
    const auto index = obtain_index(cfg, pipeline);

    ExperimentConfig config;
    config.k = cfg.k;
    config.word = word_options(cfg);
    const auto cells = run_factorial({&requirements, &taxonomies, &truths, &store, &index, &pipeline}, config);
    const auto report = analyze(cells, table);

    fs::create_directories(cfg.out);
    const fs::path dir(cfg.out);
    std::ostringstream results, chars, corr;
    write_results_tsv(cells, results);
    write_characteristics_tsv(rows, chars);
    write_correlation_tsv(cells, table, corr);
    write_file(dir / "results.tsv", results.str());
    write_file(dir / "characteristics.tsv", chars.str());
    write_file(dir / "correlation.tsv", corr.str());
    write_file(dir / "analysis.json", analysis_to_json(report));

    nlohmann::ordered_json manifest;
    manifest["format"] = "reqclass-manifest";
    manifest["version"] = 1;
    manifest["created_at"] = timestamp_utc();
    manifest["config"] = config_json(cfg);
    manifest["config_sha256"] = sha256_hex(manifest["config"].dump());
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    auto add_input = [&](const char* role, const std::string& path) {
        if (path.empty()) return;
        inputs.push_back({{"role", role}, {"path", path}, {"sha256", hash_path(path)}});
    };
    for (const auto& t : cfg.taxonomies) add_input("taxonomy", t);
    add_input("requirements", cfg.requirements);
    add_input("truth", cfg.truth);
    add_input("embeddings", cfg.embeddings);
    add_input("corpus", cfg.corpus);
    add_input("stop_words", cfg.stop_words);
    add_input("pos_sidecar", cfg.pos_sidecar);
    manifest["inputs"] = std::move(inputs);
    manifest["outputs"] = {{"results.tsv", sha256_hex(results.str())},
                           {"analysis.json", sha256_hex(analysis_to_json(report))}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    err << "wrote " << cells.size() << " cells to " << cfg.out << "\n";
    return 0;
}

int cmd_replay(const RunConfig& cfg, std::ostream& out) {
    if (cfg.results.empty() || cfg.characteristics.empty())
        throw DomainError("replay needs --results and --characteristics");
    const auto cells = parse_results_tsv(read_all(cfg.results));
    const auto table = parse_characteristics_tsv(read_all(cfg.characteristics));
    emit(cfg, out, analysis_to_json(analyze(cells, table)));
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zero-shot multi-label requirements classification against hierarchical taxonomies"};
    app.set_config("--config", "", "Config file (TOML/INI); command-line flags take precedence");
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--lang", cfg.language, "Stemmer and stop-word language (en, sv)")->capture_default_str();
        sub->add_option("--stopwords", cfg.stop_words, "Stop-word list, one word per line");
        sub->add_option("--pos-sidecar", cfg.pos_sidecar, "Pre-tagged tokens: requirement_id, token_index, tag");
    };
    auto add_classifier_opts = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "Label budget per requirement")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--embeddings", cfg.embeddings, "Textual word-vector file");
        sub->add_option("--corpus", cfg.corpus, "Concept corpus directory or cached ESA index file");
        sub->add_option("--prune-n", cfg.prune_n, "Concepts kept per ESA term row")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--proxies", cfg.proxies, "Nearest-neighbour proxies per noun")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--cosine-mode", cfg.cosine_mode, "Cosine position in the similarity predictor")
            ->capture_default_str()
            ->check(CLI::IsMember({"verbatim", "numerator"}));
        sub->add_option("--proxy-agg", cfg.proxy_agg, "Combining proxies that hit one class")
            ->capture_default_str()
            ->check(CLI::IsMember({"sum", "max"}));
        add_common(sub);
    };

    auto* stats = app.add_subcommand("taxonomy-stats", "Structural characteristics, one row per taxonomy");
    stats->add_option("taxonomy", cfg.taxonomies, "Taxonomy files")->required();
    stats->add_option("--out", cfg.out, "Output file (default: stdout)");

    auto* build = app.add_subcommand("build-index", "Build and cache an ESA concept index");
    build->add_option("--corpus", cfg.corpus, "Concept corpus directory")->required();
    build->add_option("--out", cfg.out, "Index cache file")->required();
    build->add_option("--prune-n", cfg.prune_n, "Concepts kept per term row")->capture_default_str();
    add_common(build);

    auto* classify = app.add_subcommand("classify", "Rank taxonomy nodes for each requirement (JSON lines)");
    classify->add_option("--classifier", cfg.classifier, "word or sentence")
        ->capture_default_str()
        ->check(CLI::IsMember({"word", "sentence", "word-based", "sentence-based"}));
    classify->add_option("--strategy", cfg.strategy, "flat or hierarchical")
        ->capture_default_str()
        ->check(CLI::IsMember({"flat", "hierarchical"}));
    classify->add_option("--taxonomy", cfg.taxonomies, "Taxonomy file")->required();
    classify->add_option("--requirements", cfg.requirements, "Requirements JSON")->required();
    classify->add_option("--out", cfg.out, "Output file (default: stdout)");
    add_classifier_opts(classify);

    auto* evaluate = app.add_subcommand("evaluate", "Micro-averaged recall, precision and F1 of predictions");
    evaluate->add_option("--predictions", cfg.predictions, "Output of classify")->required();
    evaluate->add_option("--truth", cfg.truth, "Ground-truth JSON")->required();
    evaluate->add_option("--taxonomy", cfg.taxonomies, "Output space taxonomy")->required();
    evaluate->add_option("--classifier", cfg.classifier, "Row label")->capture_default_str();
    evaluate->add_option("--strategy", cfg.strategy, "Row label")->capture_default_str();
    evaluate->add_option("--out", cfg.out, "Output file (default: stdout)");

    auto* experiment = app.add_subcommand("experiment", "Full classifier x strategy x output-space factorial");
    experiment->add_option("--taxonomy", cfg.taxonomies, "Taxonomy file, repeat per output space")->required();
    experiment->add_option("--requirements", cfg.requirements, "Requirements JSON")->required();
    experiment->add_option("--truth", cfg.truth, "Ground-truth JSON")->required();
    experiment->add_option("--out", cfg.out, "Output directory")->required();
    add_classifier_opts(experiment);

    auto* replay = app.add_subcommand("replay", "Statistics only, from a transcribed results table");
    replay->add_option("--results", cfg.results, "Results table (classifier, strategy, os, recall, precision, f1)")
        ->required();
    replay->add_option("--characteristics", cfg.characteristics, "Characteristics table (taxonomy-stats format)")
        ->required();
    replay->add_option("--out", cfg.out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*stats) return cmd_taxonomy_stats(cfg, out);
        if (*build) return cmd_build_index(cfg, err);
        if (*classify) return cmd_classify(cfg, out);
        if (*evaluate) return cmd_evaluate(cfg, out, err);
        if (*experiment) return cmd_experiment(cfg, err);
        if (*replay) return cmd_replay(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace reqclass
