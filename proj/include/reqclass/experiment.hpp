#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqclass/embeddings.hpp"
#include "reqclass/esa.hpp"
#include "reqclass/evaluation.hpp"
#include "reqclass/stats.hpp"
#include "reqclass/taxonomy.hpp"
#include "reqclass/textproc.hpp"
#include "reqclass/word_classifier.hpp"

namespace reqclass {

enum class ClassifierKind { Word, Sentence };
enum class Strategy { Flat, Hierarchical };

std::string_view to_string(ClassifierKind c);  // "word-based" / "sentence-based"
std::string_view to_string(Strategy s);        // "flat" / "hierarchical"
ClassifierKind parse_classifier(std::string_view s);
Strategy parse_strategy(std::string_view s);

struct ExperimentCell {
    ClassifierKind classifier = ClassifierKind::Word;
    Strategy strategy = Strategy::Flat;
    std::string output_space;
    MetricsReport metrics;
};

struct CellPredictions {
    ClassifierKind classifier = ClassifierKind::Word;
    Strategy strategy = Strategy::Flat;
    std::string output_space;
    std::vector<RankedLabels> predictions;  // requirement order of the truth sample
};

struct ExperimentInputs {
    const std::vector<Requirement>* requirements = nullptr;
    const std::vector<Taxonomy>* taxonomies = nullptr;  // one per output space (factor C level)
    const std::vector<GroundTruth>* truths = nullptr;   // one sample per output space
    const EmbeddingStore* embeddings = nullptr;
    const ConceptIndex* concept_index = nullptr;
    const TextPipeline* pipeline = nullptr;
};

struct ExperimentConfig {
    std::size_t k = 15;
    WordClassifierOptions word;  // its k is overridden by `k`
};

/// 2 x 2 x |taxonomies| cells, ordered per output space as word/flat,
/// sentence/flat, word/hierarchical, sentence/hierarchical. Each requirement is
/// classified only against spaces where it has truth labels.
std::vector<ExperimentCell> run_factorial(const ExperimentInputs& in, const ExperimentConfig& config,
                                          std::vector<CellPredictions>* predictions = nullptr);

/// Test outcome; `error` is set when the test was not computable.
template <typename Result>
struct Outcome {
    std::optional<Result> result;
    std::string error;
};

struct MetricTests {
    Outcome<WilcoxonResult> recall;
    Outcome<WilcoxonResult> precision;
    Outcome<WilcoxonResult> f1;
};

struct Correlation {
    std::string characteristic;  // description_length, depth, categories, leaf_nodes, total_nodes
    std::string metric;          // recall, precision, f1
    Outcome<SpearmanResult> test;
};

struct AnalysisReport {
    MetricTests rq1;  // word-based vs sentence-based, d = word - sentence
    MetricTests rq2;  // flat vs hierarchical, d = flat - hierarchical
    std::vector<Correlation> rq3;  // sentence-based hierarchical cells only
};

using CharacteristicsTable = std::map<std::string, TaxonomyCharacteristics>;

/// Throws DomainError if the factorial is incomplete or has duplicate cells.
AnalysisReport analyze(const std::vector<ExperimentCell>& cells, const CharacteristicsTable& characteristics);

// ---- report formats

/// Header `classifier<TAB>strategy<TAB>os<TAB>recall<TAB>precision<TAB>f1`, 2 decimals.
void write_results_tsv(const std::vector<ExperimentCell>& cells, std::ostream& out);
/// Reads the results format back (also accepts hand-transcribed tables).
std::vector<ExperimentCell> parse_results_tsv(std::string_view content);

/// Header `output_space<TAB>description_length<TAB>depth<TAB>categories<TAB>leaf_nodes<TAB>total_nodes`.
void write_characteristics_tsv(const std::vector<std::pair<std::string, TaxonomyCharacteristics>>& rows,
                               std::ostream& out);
CharacteristicsTable parse_characteristics_tsv(std::string_view content);

/// Sentence-based hierarchical cells joined with their space's characteristics.
void write_correlation_tsv(const std::vector<ExperimentCell>& cells, const CharacteristicsTable& characteristics,
                           std::ostream& out);

/// Structured analysis report, format "reqclass-analysis" version 1.
std::string analysis_to_json(const AnalysisReport& report);

/// One JSON object per line: {"requirement_id", "labels": [{"id", "score"}]}.
void write_predictions_jsonl(const std::vector<RankedLabels>& predictions, std::ostream& out);
std::vector<RankedLabels> parse_predictions_jsonl(std::string_view content);

std::string sha256_hex(std::string_view data);

}  // namespace reqclass
