#include "reqclass/taxonomy.hpp"

#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reqclass/utf8.hpp"

namespace reqclass {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_synonyms(std::string_view s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    for (auto& part : split(s, '|'))
        if (!part.empty()) out.push_back(std::move(part));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open taxonomy file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void append_words(std::string& dst, std::string_view src) {
    if (src.empty()) return;
    if (!dst.empty()) dst.push_back(' ');
    dst.append(src);
}

}  // namespace

std::string TaxonNode::own_text() const {
    std::string out;
    append_words(out, name);
    append_words(out, description);
    for (const auto& s : synonyms) append_words(out, s);
    return out;
}

long TaxonomyCharacteristics::rounded_description_length() const {
    return std::lround(description_length);
}

Taxonomy::Taxonomy(std::string id, std::vector<TaxonNode> nodes, std::vector<std::string> positions)
    : id_(std::move(id)), nodes_(std::move(nodes)) {
    auto where = [&](std::size_t i) {
        return i < positions.size() ? positions[i] : "record " + std::to_string(i + 1);
    };

    by_id_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.id.empty()) throw ParseError("empty node id at " + where(i));
        if (!by_id_.emplace(n.id, i).second)
            throw ParseError("duplicate node id '" + n.id + "' at " + where(i));
    }

    children_.assign(nodes_.size(), {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!n.parent_id) {
            roots_.push_back(i);
            continue;
        }
        auto it = by_id_.find(*n.parent_id);
        if (it == by_id_.end())
            throw ParseError("node '" + n.id + "' at " + where(i) + " has dangling parent_id '" +
                             *n.parent_id + "'");
        if (it->second == i)
            throw ParseError("cycle detected: node '" + n.id + "' at " + where(i) + " is its own parent");
        children_[it->second].push_back(i);
    }

    // Nodes not reachable from the virtual root sit on (or under) a cycle.
    levels_.assign(nodes_.size(), 0);
    std::deque<std::size_t> queue(roots_.begin(), roots_.end());
    for (auto r : roots_) levels_[r] = 1;
    while (!queue.empty()) {
        auto i = queue.front();
        queue.pop_front();
        for (auto c : children_[i]) {
            levels_[c] = levels_[i] + 1;
            queue.push_back(c);
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (levels_[i] == 0)
            throw ParseError("cycle detected through node '" + nodes_[i].id + "' at " + where(i));

    effective_.reserve(nodes_.size());
    for (const auto& n : nodes_) effective_.push_back(n.own_text());
}

std::optional<std::size_t> Taxonomy::find(std::string_view node_id) const {
    auto it = by_id_.find(std::string(node_id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

Taxonomy parse_taxonomy_tsv(std::string_view content, std::string taxonomy_id) {
    std::vector<TaxonNode> nodes;
    std::vector<std::string> positions;
    bool header_seen = false;
    std::size_t line_no = 0;
    for (auto& raw : split(content, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto fields = split(line, '\t');
        if (!header_seen) {
            header_seen = true;
            if (fields.size() < 3 || fields[0] != "id" || fields[1] != "parent_id" || fields[2] != "name")
                throw ParseError("taxonomy line " + std::to_string(line_no) +
                                 ": expected header 'id<TAB>parent_id<TAB>name<TAB>description<TAB>synonyms'");
            continue;
        }
        if (fields.size() < 3 || fields.size() > 5)
            throw ParseError("malformed taxonomy record at line " + std::to_string(line_no) + ": expected 3 to 5 fields, got " +
                             std::to_string(fields.size()));
        TaxonNode n;
        n.id = fields[0];
        if (!fields[1].empty()) n.parent_id = fields[1];
        n.name = fields[2];
        if (fields.size() > 3) n.description = fields[3];
        if (fields.size() > 4) n.synonyms = split_synonyms(fields[4]);
        nodes.push_back(std::move(n));
        positions.push_back("line " + std::to_string(line_no));
    }
    return Taxonomy(std::move(taxonomy_id), std::move(nodes), std::move(positions));
}

Taxonomy parse_taxonomy_json(std::string_view content, std::string fallback_id) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("taxonomy JSON: ") + e.what());
    }
    std::string id = std::move(fallback_id);
    const nlohmann::json* records = &doc;
    if (doc.is_object()) {
        if (doc.contains("id") && doc["id"].is_string()) id = doc["id"].get<std::string>();
        if (!doc.contains("nodes")) throw ParseError("taxonomy JSON object lacks a 'nodes' array");
        records = &doc["nodes"];
    }
    if (!records->is_array()) throw ParseError("taxonomy JSON: nodes must be an array");

    std::vector<TaxonNode> nodes;
    std::vector<std::string> positions;
    std::size_t index = 0;
    for (const auto& rec : *records) {
        ++index;
        auto where = "record " + std::to_string(index);
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
            throw ParseError("malformed taxonomy record at " + where + ": missing string 'id'");
        TaxonNode n;
        n.id = rec["id"].get<std::string>();
        auto string_field = [&](const char* key) -> std::string {
            if (!rec.contains(key) || rec[key].is_null()) return {};
            if (!rec[key].is_string())
                throw ParseError("malformed taxonomy record '" + n.id + "' at " + where + ": '" + key +
                                 "' must be a string");
            return rec[key].get<std::string>();
        };
        auto parent = string_field("parent_id");
        if (!parent.empty()) n.parent_id = parent;
        n.name = string_field("name");
        n.description = string_field("description");
        if (rec.contains("synonyms") && !rec["synonyms"].is_null()) {
            const auto& syn = rec["synonyms"];
            if (syn.is_string()) {
                n.synonyms = split_synonyms(syn.get<std::string>());
            } else if (syn.is_array()) {
                for (const auto& s : syn) {
                    if (!s.is_string())
                        throw ParseError("malformed taxonomy record '" + n.id + "' at " + where +
                                         ": synonyms must be strings");
                    if (!s.get<std::string>().empty()) n.synonyms.push_back(s.get<std::string>());
                }
            } else {
                throw ParseError("malformed taxonomy record '" + n.id + "' at " + where +
                                 ": synonyms must be a list or '|'-separated string");
            }
        }
        nodes.push_back(std::move(n));
        positions.push_back(where);
    }
    return Taxonomy(std::move(id), std::move(nodes), std::move(positions));
}

Taxonomy load_taxonomy(const std::string& path) {
    std::filesystem::path p(path);
    auto content = read_file(path);
    auto stem = p.stem().string();
    try {
        if (p.extension() == ".json") return parse_taxonomy_json(content, stem);
        return parse_taxonomy_tsv(content, stem);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

TaxonomyCharacteristics characteristics(const Taxonomy& t) {
    if (t.empty()) throw DomainError("characteristics of an empty taxonomy are undefined");
    TaxonomyCharacteristics ch;
    std::size_t chars = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        chars += utf8::length(n.name) + utf8::length(n.description);
        for (const auto& s : n.synonyms) chars += utf8::length(s);
        ch.depth = std::max(ch.depth, t.level(i));
        if (t.children(i).empty())
            ++ch.leaf_nodes;
        else
            ++ch.categories;
    }
    ch.total_nodes = ch.categories + ch.leaf_nodes;
    ch.description_length = static_cast<double>(chars) / static_cast<double>(t.size());
    return ch;
}

Taxonomy aggregate_hierarchical(const Taxonomy& t) {
    Taxonomy out = t;
    out.aggregated_ = true;
    // Post-order: children before parents, so each subtree text is built once.
    std::vector<std::string> subtree(t.size());
    std::vector<std::pair<std::size_t, bool>> stack;
    for (auto it = t.roots().rbegin(); it != t.roots().rend(); ++it) stack.emplace_back(*it, false);
    while (!stack.empty()) {
        auto [i, expanded] = stack.back();
        stack.pop_back();
        if (!expanded) {
            stack.emplace_back(i, true);
            const auto& ch = t.children(i);
            for (auto c = ch.rbegin(); c != ch.rend(); ++c) stack.emplace_back(*c, false);
            continue;
        }
        std::string text = t.node(i).own_text();
        for (auto c : t.children(i)) append_words(text, subtree[c]);
        subtree[i] = std::move(text);
    }
    out.effective_ = std::move(subtree);
    return out;
}

}  // namespace reqclass
