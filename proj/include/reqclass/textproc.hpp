#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reqclass/error.hpp"
#include "reqclass/stemmer.hpp"

namespace reqclass {

struct Requirement {
    std::string id;
    std::string text;
    std::string document_title;
    std::string section_title;
};

enum class Pos { Noun, Verb, Adjective, Adverb, Number, Other };

std::string_view to_string(Pos p);
/// Accepts coarse names (NOUN, VERB...), Universal Dependencies and Penn tags.
Pos parse_pos(std::string_view tag);

struct Token {
    std::string surface;
    std::string stem;
    Pos pos = Pos::Other;
};

struct TokenizedText {
    std::vector<Token> tokens;
    std::string source;  // requirement id or node id the text came from
};

/// document_title, section_title and text joined by single spaces (empty parts skipped).
std::string aggregate_requirement(const Requirement& r);

/// Lowercased maximal runs of letters and digits.
std::vector<std::string> tokenize(std::string_view text);

using StopWords = std::unordered_set<std::string>;

StopWords builtin_stop_words(std::string_view language);
/// One word per line, UTF-8; blank lines ignored; words lowercased.
StopWords load_stop_words(const std::string& path);

class PosTagger {
public:
    virtual ~PosTagger() = default;
    /// `words` is the full token stream (before stop-word removal).
    virtual std::vector<Pos> tag(std::span<const std::string> words, std::string_view source) const = 0;
};

/// Closed-class lexicon plus suffix rules. Unknown content words default to noun.
class HeuristicTagger final : public PosTagger {
public:
    explicit HeuristicTagger(std::string language);
    std::vector<Pos> tag(std::span<const std::string> words, std::string_view source) const override;

private:
    std::string language_;
};

/// Pre-tagged tokens keyed by source id and token index. Unannotated tokens of an
/// annotated source are Other; sources absent from the file go to the fallback.
class SidecarTagger final : public PosTagger {
public:
    SidecarTagger(std::map<std::string, std::map<std::size_t, Pos>> tags,
                  std::shared_ptr<const PosTagger> fallback);
    std::vector<Pos> tag(std::span<const std::string> words, std::string_view source) const override;

private:
    std::map<std::string, std::map<std::size_t, Pos>> tags_;
    std::shared_ptr<const PosTagger> fallback_;
};

/// Lines `requirement_id<TAB>token_index<TAB>tag`; '#' comments allowed.
std::map<std::string, std::map<std::size_t, Pos>> parse_pos_sidecar(std::string_view content);
std::map<std::string, std::map<std::size_t, Pos>> load_pos_sidecar(const std::string& path);

struct PipelineOptions {
    std::string language = "en";
    std::string stop_words_path;  // empty: built-in list for the language
    std::string pos_sidecar_path; // empty: heuristic tagger only
};

/// Tokenize, tag, drop stop words, stem. Immutable once built.
class TextPipeline {
public:
    explicit TextPipeline(const PipelineOptions& options = {});
    TextPipeline(std::string language, StopWords stop_words, std::shared_ptr<const PosTagger> tagger);

    TokenizedText preprocess(std::string_view text, std::string_view source = {}) const;
    std::string stem(std::string_view lowercased_word) const { return stemmer_->stem(lowercased_word); }
    bool is_stop_word(const std::string& w) const { return stop_words_.count(w) > 0; }
    const std::string& language() const { return language_; }

private:
    std::string language_;
    StopWords stop_words_;
    std::shared_ptr<const Stemmer> stemmer_;
    std::shared_ptr<const PosTagger> tagger_;
};

std::vector<Token> extract_nouns(const TokenizedText& t);

/// JSON array of {id, text, document_title, section_title}; whitespace-only input is empty.
std::vector<Requirement> parse_requirements(std::string_view content);
std::vector<Requirement> load_requirements(const std::string& path);

}  // namespace reqclass
