#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reqclass/error.hpp"

namespace reqclass {

struct TaxonNode {
    std::string id;
    std::optional<std::string> parent_id;
    std::string name;
    std::string description;
    std::vector<std::string> synonyms;

    /// name, description and synonyms joined by single spaces, empty parts skipped.
    std::string own_text() const;
};

struct TaxonomyCharacteristics {
    double description_length = 0.0;  // exact mean; round only for reporting
    int depth = 0;
    std::size_t categories = 0;
    std::size_t leaf_nodes = 0;
    std::size_t total_nodes = 0;

    long rounded_description_length() const;
};

/// Immutable forest of taxon nodes. Level 1 holds the top-level nodes; a
/// virtual root at level 0 joins them and is never counted.
class Taxonomy {
public:
    Taxonomy() = default;

    /// Validates ids, parents and acyclicity. `positions` (optional, same
    /// length as `nodes`) labels each record in error messages.
    Taxonomy(std::string id, std::vector<TaxonNode> nodes,
             std::vector<std::string> positions = {});

    const std::string& id() const { return id_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    const std::vector<TaxonNode>& nodes() const { return nodes_; }
    const TaxonNode& node(std::size_t index) const { return nodes_.at(index); }
    std::optional<std::size_t> find(std::string_view node_id) const;
    bool contains(std::string_view node_id) const { return find(node_id).has_value(); }

    const std::vector<std::size_t>& children(std::size_t index) const { return children_.at(index); }
    const std::vector<std::size_t>& roots() const { return roots_; }
    int level(std::size_t index) const { return levels_.at(index); }

    /// Text each classifier sees for the node: own text for a flat
    /// taxonomy, bottom-up aggregate for a hierarchical one.
    const std::string& effective_text(std::size_t index) const { return effective_.at(index); }
    bool aggregated() const { return aggregated_; }

private:
    friend Taxonomy aggregate_hierarchical(const Taxonomy& t);

    std::string id_;
    std::vector<TaxonNode> nodes_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> roots_;
    std::vector<int> levels_;
    std::vector<std::string> effective_;
    bool aggregated_ = false;
};

/// Delimited form: header line `id<TAB>parent_id<TAB>name<TAB>description<TAB>synonyms`,
/// synonyms separated by '|'. Blank lines and lines starting with '#' are skipped.
Taxonomy parse_taxonomy_tsv(std::string_view content, std::string taxonomy_id);

/// Structured form: either `{"id": ..., "nodes": [...]}` or a bare array of
/// node objects (then `fallback_id` names the taxonomy).
Taxonomy parse_taxonomy_json(std::string_view content, std::string fallback_id);

/// Dispatches on extension (.json or delimited); the file stem is the default id.
Taxonomy load_taxonomy(const std::string& path);

TaxonomyCharacteristics characteristics(const Taxonomy& t);

/// Same structure; each node's effective text becomes its own text followed by
/// the own text of every descendant, depth-first in document order.
Taxonomy aggregate_hierarchical(const Taxonomy& t);

}  // namespace reqclass
