#include "reqclass/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>
#include <openssl/evp.h>

namespace reqclass {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<const char*, 3> kMetricNames{"recall", "precision", "f1"};
constexpr std::array<const char*, 5> kCharacteristicNames{"description_length", "depth", "categories", "leaf_nodes",
                                                          "total_nodes"};

double metric_value(const MetricsReport& m, std::size_t which) {
    switch (which) {
    case 0: return m.recall;
    case 1: return m.precision;
    default: return m.f1;
    }
}

double characteristic_value(const TaxonomyCharacteristics& c, std::size_t which) {
    switch (which) {
    case 0: return c.description_length;
    case 1: return static_cast<double>(c.depth);
    case 2: return static_cast<double>(c.categories);
    case 3: return static_cast<double>(c.leaf_nodes);
    default: return static_cast<double>(c.total_nodes);
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, '\t')) out.push_back(f);
    if (!line.empty() && line.back() == '\t') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_tsv(std::string_view content, const std::vector<std::string>& header,
                                               const char* what) {
    std::istringstream in{std::string(content)};
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (!header_seen) {
            header_seen = true;
            if (fields != header) throw ParseError(std::string(what) + ": unexpected header at line " + std::to_string(line_no));
            continue;
        }
        if (fields.size() != header.size())
            throw ParseError(std::string(what) + " line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        rows.push_back(std::move(fields));
    }
    if (!header_seen) throw ParseError(std::string(what) + ": missing header");
    return rows;
}

double parse_number(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw ParseError(std::string(what) + ": '" + s + "' is not a number");
    return v;
}

Outcome<WilcoxonResult> run_wilcoxon(const std::vector<std::pair<double, double>>& pairs) {
    Outcome<WilcoxonResult> o;
    try {
        o.result = wilcoxon_signed_rank(pairs);
    } catch (const DomainError& e) {
        o.error = e.what();
    }
    return o;
}

Json outcome_json(const Outcome<WilcoxonResult>& o) {
    Json j;
    if (!o.result) {
        j["error"] = o.error;
        return j;
    }
    const auto& r = *o.result;
    j["t_plus"] = r.t_plus;
    j["t_minus"] = r.t_minus;
    j["w"] = r.w;
    j["n"] = r.n;
    j["critical_value"] = r.critical_value ? Json(*r.critical_value) : Json(nullptr);
    j["alpha"] = kAlpha;
    j["significant"] = r.significant;
    return j;
}

Json outcome_json(const Outcome<SpearmanResult>& o) {
    Json j;
    if (!o.result) {
        j["error"] = o.error;
        return j;
    }
    const auto& r = *o.result;
    j["rho"] = r.rho;
    j["n"] = r.n;
    j["critical_value"] = r.critical_value ? Json(*r.critical_value) : Json(nullptr);
    j["significant"] = r.significant;
    j["critical_value_one_sided"] = r.critical_value_one_sided ? Json(*r.critical_value_one_sided) : Json(nullptr);
    j["significant_one_sided"] = r.significant_one_sided;
    return j;
}

}  // namespace

std::string_view to_string(ClassifierKind c) { return c == ClassifierKind::Word ? "word-based" : "sentence-based"; }
std::string_view to_string(Strategy s) { return s == Strategy::Flat ? "flat" : "hierarchical"; }

ClassifierKind parse_classifier(std::string_view s) {
    if (s == "word" || s == "word-based") return ClassifierKind::Word;
    if (s == "sentence" || s == "sentence-based") return ClassifierKind::Sentence;
    throw ParseError("unknown classifier '" + std::string(s) + "' (expected word or sentence)");
}

Strategy parse_strategy(std::string_view s) {
    if (s == "flat") return Strategy::Flat;
    if (s == "hierarchical" || s == "hier") return Strategy::Hierarchical;
    throw ParseError("unknown strategy '" + std::string(s) + "' (expected flat or hierarchical)");
}

std::vector<ExperimentCell> run_factorial(const ExperimentInputs& in, const ExperimentConfig& config,
                                          std::vector<CellPredictions>* predictions) {
    if (!in.requirements || !in.taxonomies || !in.truths || !in.embeddings || !in.concept_index || !in.pipeline)
        throw DomainError("experiment inputs are incomplete");
    if (config.k == 0) throw DomainError("label budget k must be at least 1");
    if (in.taxonomies->empty()) throw DomainError("experiment needs at least one output space");

    std::map<std::string, const Requirement*> by_id;
    for (const auto& r : *in.requirements) by_id.emplace(r.id, &r);

    std::set<std::string> space_ids;
    for (const auto& t : *in.taxonomies)
        if (!space_ids.insert(t.id()).second) throw DomainError("output space '" + t.id() + "' given twice");
    for (const auto& g : *in.truths)
        if (!space_ids.count(g.output_space_id))
            throw DomainError("missing taxonomy for output space '" + g.output_space_id + "' (sample '" + g.sample_id +
                              "')");

    WordClassifierOptions word_options = config.word;
    word_options.k = config.k;

    std::vector<ExperimentCell> cells;
    for (const auto& flat : *in.taxonomies) {
        auto truth_it = std::find_if(in.truths->begin(), in.truths->end(),
                                     [&](const GroundTruth& g) { return g.output_space_id == flat.id(); });
        if (truth_it == in.truths->end())
            throw DomainError("missing ground truth sample for output space '" + flat.id() + "'");
        const GroundTruth& truth = *truth_it;
        if (truth.entries.empty())
            throw DomainError("ground truth sample '" + truth.sample_id + "' has no labelled requirements");
        validate_ground_truth(truth, flat);

        std::vector<const Requirement*> sample;
        for (const auto& [req_id, labels] : truth.entries) {
            auto it = by_id.find(req_id);
            if (it == by_id.end())
                throw DomainError("sample '" + truth.sample_id + "' references unknown requirement '" + req_id + "'");
            sample.push_back(it->second);
        }

        const Taxonomy hier = aggregate_hierarchical(flat);
        for (Strategy strategy : {Strategy::Flat, Strategy::Hierarchical}) {
            const Taxonomy& space = strategy == Strategy::Flat ? flat : hier;
            const WordClassifier word(space, *in.embeddings, *in.pipeline, word_options);
            const SentenceClassifier sentence(space, *in.concept_index, *in.pipeline, config.k);
            for (ClassifierKind kind : {ClassifierKind::Word, ClassifierKind::Sentence}) {
                std::vector<Confusion> counts;
                std::vector<RankedLabels> ranked;
                counts.reserve(sample.size());
                for (const Requirement* r : sample) {
                    auto labels = kind == ClassifierKind::Word ? word.classify(*r) : sentence.classify(*r);
                    counts.push_back(confusion_counts(labels, truth.entries.at(r->id), space));
                    if (predictions) ranked.push_back(std::move(labels));
                }
                cells.push_back(ExperimentCell{kind, strategy, flat.id(), micro_metrics(counts)});
                if (predictions) predictions->push_back(CellPredictions{kind, strategy, flat.id(), std::move(ranked)});
            }
        }
    }
    return cells;
}

AnalysisReport analyze(const std::vector<ExperimentCell>& cells, const CharacteristicsTable& characteristics) {
    using Key = std::tuple<std::string, ClassifierKind, Strategy>;
    std::map<Key, const ExperimentCell*> grid;
    std::vector<std::string> spaces;
    for (const auto& c : cells) {
        if (!grid.emplace(Key{c.output_space, c.classifier, c.strategy}, &c).second)
            throw DomainError("duplicate cell for " + std::string(to_string(c.classifier)) + "/" +
                              std::string(to_string(c.strategy)) + "/" + c.output_space);
        if (std::find(spaces.begin(), spaces.end(), c.output_space) == spaces.end()) spaces.push_back(c.output_space);
    }
    if (spaces.empty()) throw DomainError("analysis needs a completed factorial, got no cells");
    auto cell = [&](const std::string& os, ClassifierKind c, Strategy s) -> const ExperimentCell& {
        auto it = grid.find(Key{os, c, s});
        if (it == grid.end())
            throw DomainError("incomplete factorial: missing " + std::string(to_string(c)) + "/" +
                              std::string(to_string(s)) + "/" + os);
        return *it->second;
    };
    for (const auto& os : spaces)
        for (auto c : {ClassifierKind::Word, ClassifierKind::Sentence})
            for (auto s : {Strategy::Flat, Strategy::Hierarchical}) (void)cell(os, c, s);

    AnalysisReport report;
    std::array<Outcome<WilcoxonResult>*, 3> rq1{&report.rq1.recall, &report.rq1.precision, &report.rq1.f1};
    std::array<Outcome<WilcoxonResult>*, 3> rq2{&report.rq2.recall, &report.rq2.precision, &report.rq2.f1};
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        std::vector<std::pair<double, double>> by_classifier, by_strategy;
        for (const auto& os : spaces) {
            for (auto s : {Strategy::Flat, Strategy::Hierarchical})
                by_classifier.emplace_back(metric_value(cell(os, ClassifierKind::Word, s).metrics, m),
                                           metric_value(cell(os, ClassifierKind::Sentence, s).metrics, m));
            for (auto c : {ClassifierKind::Word, ClassifierKind::Sentence})
                by_strategy.emplace_back(metric_value(cell(os, c, Strategy::Flat).metrics, m),
                                         metric_value(cell(os, c, Strategy::Hierarchical).metrics, m));
        }
        *rq1[m] = run_wilcoxon(by_classifier);
        *rq2[m] = run_wilcoxon(by_strategy);
    }

    for (std::size_t ch = 0; ch < kCharacteristicNames.size(); ++ch) {
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
            Correlation corr{kCharacteristicNames[ch], kMetricNames[m], {}};
            std::vector<double> xs, ys;
            for (const auto& os : spaces) {
                auto it = characteristics.find(os);
                if (it == characteristics.end()) {
                    corr.test.error = "no characteristics for output space '" + os + "'";
                    break;
                }
                xs.push_back(characteristic_value(it->second, ch));
                ys.push_back(metric_value(cell(os, ClassifierKind::Sentence, Strategy::Hierarchical).metrics, m));
            }
            if (corr.test.error.empty()) {
                try {
                    corr.test.result = spearman_rho(xs, ys);
                } catch (const DomainError& e) {
                    corr.test.error = e.what();
                }
            }
            report.rq3.push_back(std::move(corr));
        }
    }
    return report;
}

void write_results_tsv(const std::vector<ExperimentCell>& cells, std::ostream& out) {
    out << "classifier\tstrategy\tos\trecall\tprecision\tf1\n";
    out << std::fixed << std::setprecision(2);
    for (const auto& c : cells)
        out << to_string(c.classifier) << '\t' << to_string(c.strategy) << '\t' << c.output_space << '\t'
            << c.metrics.recall << '\t' << c.metrics.precision << '\t' << c.metrics.f1 << '\n';
    out << std::defaultfloat;
}

std::vector<ExperimentCell> parse_results_tsv(std::string_view content) {
    std::vector<ExperimentCell> cells;
    for (const auto& f : read_tsv(content, {"classifier", "strategy", "os", "recall", "precision", "f1"}, "results table")) {
        ExperimentCell c;
        c.classifier = parse_classifier(f[0]);
        c.strategy = parse_strategy(f[1]);
        c.output_space = f[2];
        c.metrics.recall = parse_number(f[3], "recall");
        c.metrics.precision = parse_number(f[4], "precision");
        c.metrics.f1 = parse_number(f[5], "f1");
        cells.push_back(std::move(c));
    }
    return cells;
}

void write_characteristics_tsv(const std::vector<std::pair<std::string, TaxonomyCharacteristics>>& rows,
                               std::ostream& out) {
    out << "output_space\tdescription_length\tdepth\tcategories\tleaf_nodes\ttotal_nodes\n";
    for (const auto& [id, c] : rows)
        out << id << '\t' << c.rounded_description_length() << '\t' << c.depth << '\t' << c.categories << '\t'
            << c.leaf_nodes << '\t' << c.total_nodes << '\n';
}

CharacteristicsTable parse_characteristics_tsv(std::string_view content) {
    CharacteristicsTable table;
    for (const auto& f : read_tsv(content,
                                  {"output_space", "description_length", "depth", "categories", "leaf_nodes", "total_nodes"},
                                  "characteristics table")) {
        TaxonomyCharacteristics c;
        c.description_length = parse_number(f[1], "description_length");
        c.depth = static_cast<int>(parse_number(f[2], "depth"));
        c.categories = static_cast<std::size_t>(parse_number(f[3], "categories"));
        c.leaf_nodes = static_cast<std::size_t>(parse_number(f[4], "leaf_nodes"));
        c.total_nodes = static_cast<std::size_t>(parse_number(f[5], "total_nodes"));
        if (c.total_nodes != c.categories + c.leaf_nodes)
            throw ParseError("characteristics of '" + f[0] + "': total_nodes != categories + leaf_nodes");
        if (!table.emplace(f[0], c).second) throw ParseError("characteristics table lists '" + f[0] + "' twice");
    }
    return table;
}

void write_correlation_tsv(const std::vector<ExperimentCell>& cells, const CharacteristicsTable& characteristics,
                           std::ostream& out) {
    out << "os";
    for (auto* n : kCharacteristicNames) out << '\t' << n;
    for (auto* n : kMetricNames) out << '\t' << n;
    out << '\n';
    for (const auto& c : cells) {
        if (c.classifier != ClassifierKind::Sentence || c.strategy != Strategy::Hierarchical) continue;
        auto it = characteristics.find(c.output_space);
        if (it == characteristics.end()) continue;
        const auto& ch = it->second;
        out << c.output_space << '\t' << ch.rounded_description_length() << '\t' << ch.depth << '\t' << ch.categories
            << '\t' << ch.leaf_nodes << '\t' << ch.total_nodes << std::fixed << std::setprecision(2) << '\t'
            << c.metrics.recall << '\t' << c.metrics.precision << '\t' << c.metrics.f1 << std::defaultfloat << '\n';
    }
}

std::string analysis_to_json(const AnalysisReport& report) {
    Json j;
    j["format"] = "reqclass-analysis";
    j["version"] = 1;
    auto tests = [](const MetricTests& t, const char* factor, const char* difference) {
        Json o;
        o["factor"] = factor;
        o["difference"] = difference;
        o["recall"] = outcome_json(t.recall);
        o["precision"] = outcome_json(t.precision);
        o["f1"] = outcome_json(t.f1);
        return o;
    };
    j["rq1"] = tests(report.rq1, "classifier", "word-based - sentence-based");
    j["rq2"] = tests(report.rq2, "strategy", "flat - hierarchical");
    Json rq3 = Json::array();
    for (const auto& c : report.rq3) {
        Json o;
        o["characteristic"] = c.characteristic;
        o["metric"] = c.metric;
        o["spearman"] = outcome_json(c.test);
        rq3.push_back(std::move(o));
    }
    j["rq3"] = std::move(rq3);
    return j.dump(2) + "\n";
}

void write_predictions_jsonl(const std::vector<RankedLabels>& predictions, std::ostream& out) {
    for (const auto& p : predictions) {
        Json j;
        j["requirement_id"] = p.requirement_id;
        Json labels = Json::array();
        for (const auto& l : p.labels) labels.push_back(Json{{"id", l.node_id}, {"score", l.score}});
        j["labels"] = std::move(labels);
        out << j.dump() << '\n';
    }
}

std::vector<RankedLabels> parse_predictions_jsonl(std::string_view content) {
    std::vector<RankedLabels> out;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            RankedLabels r;
            r.requirement_id = j.at("requirement_id").get<std::string>();
            for (const auto& l : j.at("labels")) r.labels.push_back({l.at("id").get<std::string>(), l.at("score").get<double>()});
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("predictions line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
    return hex.str();
}

}  // namespace reqclass
