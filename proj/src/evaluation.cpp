#include "reqclass/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reqclass {

Confusion confusion_counts(const RankedLabels& predicted, const LabelSet& truth) {
    LabelSet pred;
    for (const auto& l : predicted.labels) pred.insert(l.node_id);
    Confusion c;
    for (const auto& id : pred) {
        if (truth.count(id))
            ++c.tp;
        else
            ++c.fp;
    }
    c.fn = truth.size() - c.tp;
    return c;
}

Confusion confusion_counts(const RankedLabels& predicted, const LabelSet& truth, const Taxonomy& space) {
    for (const auto& l : predicted.labels)
        if (!space.contains(l.node_id))
            throw DomainError("predicted node '" + l.node_id + "' is not in output space '" + space.id() + "'");
    for (const auto& id : truth)
        if (!space.contains(id))
            throw DomainError("truth node '" + id + "' is not in output space '" + space.id() + "'");
    return confusion_counts(predicted, truth);
}

MetricsReport micro_metrics(std::span<const Confusion> per_document) {
    if (per_document.empty()) throw DomainError("micro metrics need at least one document");
    MetricsReport r;
    r.documents = per_document.size();
    for (const auto& c : per_document) r.totals += c;
    const auto& t = r.totals;
    const double tp = static_cast<double>(t.tp);
    if (t.tp + t.fn == 0)
        r.recall_undefined = true;
    else
        r.recall = tp / static_cast<double>(t.tp + t.fn);
    if (t.tp + t.fp == 0)
        r.precision_undefined = true;
    else
        r.precision = tp / static_cast<double>(t.tp + t.fp);
    if (r.precision + r.recall > 0.0)
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    else
        r.f1_undefined = true;
    return r;
}

double irr(std::size_t spans, std::size_t agreements) {
    if (spans == 0) throw DomainError("IRR needs at least one span");
    if (agreements > spans) throw DomainError("IRR agreements exceed spans");
    return 100.0 * static_cast<double>(agreements) / static_cast<double>(spans);
}

bool is_no_available_code(std::string_view label) {
    std::string norm;
    for (char c : label) {
        if (c == '_' || c == '-') c = ' ';
        norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    auto b = norm.find_first_not_of(' ');
    auto e = norm.find_last_not_of(' ');
    return b != std::string::npos && norm.substr(b, e - b + 1) == "no available code";
}

std::vector<GroundTruth> parse_ground_truth(std::string_view content) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("ground truth JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("ground truth file must hold a JSON array");

    std::vector<GroundTruth> out;
    auto sample_for = [&](const std::string& space, const std::string& sample) -> GroundTruth& {
        for (auto& g : out)
            if (g.output_space_id == space) {
                if (!sample.empty() && g.sample_id != sample)
                    throw ParseError("output space '" + space + "' appears under samples '" + g.sample_id +
                                     "' and '" + sample + "'");
                return g;
            }
        out.push_back(GroundTruth{sample.empty() ? space : sample, space, {}, 0});
        return out.back();
    };

    std::size_t index = 0;
    for (const auto& rec : doc) {
        ++index;
        auto where = "ground truth record " + std::to_string(index);
        if (!rec.is_object() || !rec.contains("requirement_id") || !rec["requirement_id"].is_string() ||
            !rec.contains("output_space_id") || !rec["output_space_id"].is_string() || !rec.contains("labels") ||
            !rec["labels"].is_array())
            throw ParseError(where + ": expected {requirement_id, output_space_id, labels: [...]}");
        std::string sample;
        if (rec.contains("sample_id") && rec["sample_id"].is_string()) sample = rec["sample_id"].get<std::string>();
        auto& g = sample_for(rec["output_space_id"].get<std::string>(), sample);
        auto& labels = g.entries[rec["requirement_id"].get<std::string>()];
        for (const auto& l : rec["labels"]) {
            if (!l.is_string()) throw ParseError(where + ": labels must be strings");
            auto id = l.get<std::string>();
            if (is_no_available_code(id))
                ++g.excluded_no_code;
            else
                labels.insert(std::move(id));
        }
    }
    for (auto& g : out) std::erase_if(g.entries, [](const auto& kv) { return kv.second.empty(); });
    return out;
}

std::vector<GroundTruth> load_ground_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open ground truth file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_ground_truth(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void validate_ground_truth(const GroundTruth& truth, const Taxonomy& space) {
    for (const auto& [req, labels] : truth.entries)
        for (const auto& id : labels)
            if (!space.contains(id))
                throw DomainError("sample '" + truth.sample_id + "': requirement '" + req + "' labelled with '" + id +
                                  "', which is not in output space '" + space.id() + "'");
}

}  // namespace reqclass
