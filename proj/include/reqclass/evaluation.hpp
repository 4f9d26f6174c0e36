#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reqclass/ranked_labels.hpp"
#include "reqclass/taxonomy.hpp"

namespace reqclass {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    Confusion& operator+=(const Confusion& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct MetricsReport {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    Confusion totals;
    std::size_t documents = 0;
    // Set when the metric's denominator was zero and 0 was reported instead.
    bool recall_undefined = false;
    bool precision_undefined = false;
    bool f1_undefined = false;
};

using LabelSet = std::set<std::string>;

/// Expert labels for one output space, keyed by requirement id.
struct GroundTruth {
    std::string sample_id;
    std::string output_space_id;
    std::map<std::string, LabelSet> entries;
    std::size_t excluded_no_code = 0;  // "No Available Code" labels dropped at load
};

Confusion confusion_counts(const RankedLabels& predicted, const LabelSet& truth);
/// Also checks that every predicted and true id belongs to `space`.
Confusion confusion_counts(const RankedLabels& predicted, const LabelSet& truth, const Taxonomy& space);

/// Pooled (micro) recall, precision and F1.
MetricsReport micro_metrics(std::span<const Confusion> per_document);

/// Joint probability of agreement, in percent.
double irr(std::size_t spans, std::size_t agreements);

bool is_no_available_code(std::string_view label);

/// JSON array of {requirement_id, output_space_id, labels: [...], sample_id?}.
/// Records are grouped per output space (first-appearance order); labels of the
/// same requirement are unioned; requirements left without labels are dropped.
std::vector<GroundTruth> parse_ground_truth(std::string_view content);
std::vector<GroundTruth> load_ground_truth(const std::string& path);

/// Throws DomainError naming the first label missing from `space`.
void validate_ground_truth(const GroundTruth& truth, const Taxonomy& space);

}  // namespace reqclass
