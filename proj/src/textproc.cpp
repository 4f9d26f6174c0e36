#include "reqclass/textproc.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reqclass/utf8.hpp"

namespace reqclass {

namespace {

constexpr const char* kEnglishStopWords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
    "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
    "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "should",
    "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn",
    "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn", "weren", "won",
    "wouldn"};

constexpr const char* kSwedishStopWords[] = {
    "och", "det", "att", "i", "en", "jag", "hon", "som", "han", "på", "den", "med", "var", "sig", "för",
    "så", "till", "är", "men", "ett", "om", "hade", "de", "av", "icke", "mig", "du", "henne", "då",
    "sin", "nu", "har", "inte", "hans", "honom", "skulle", "hennes", "där", "min", "man", "ej", "vid",
    "kunde", "något", "från", "ut", "när", "efter", "upp", "vi", "dem", "vara", "vad", "över", "än",
    "dig", "kan", "sina", "här", "ha", "mot", "alla", "under", "någon", "eller", "allt", "mycket",
    "sedan", "ju", "denna", "själv", "detta", "åt", "utan", "varit", "hur", "ingen", "mitt", "ni",
    "bli", "blev", "oss", "din", "dessa", "några", "deras", "blir", "mina", "samma", "vilken", "er",
    "sådan", "vår", "blivit", "dess", "inom", "mellan", "sådant", "varför", "varje", "vilka", "ditt",
    "vem", "vilket", "sitta", "sådana", "vart", "dina", "vars", "vårt", "våra", "ert", "era", "vilkas"};

bool ends(std::string_view w, std::string_view s) {
    return w.size() >= s.size() && w.substr(w.size() - s.size()) == s;
}

bool all_digits(std::string_view w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

template <std::size_t N>
bool in(const std::string_view (&list)[N], std::string_view w) {
    return std::find(std::begin(list), std::end(list), w) != std::end(list);
}

Pos tag_english(std::string_view w, std::string_view prev, const StopWords& stop) {
    static constexpr std::string_view modals[] = {"shall", "must", "should", "will", "would",
                                                  "may",   "might", "can",   "could"};
    static constexpr std::string_view be[] = {"am", "is", "are", "was", "were", "be", "been", "being"};
    static constexpr std::string_view verbs[] = {
        "have", "has", "had", "do", "does", "did", "provide", "provides", "ensure", "ensures",
        "include", "includes", "contain", "contains", "allow", "allows", "enable", "enables", "comply",
        "perform", "install", "locate", "construct", "maintain", "consider", "follow", "require",
        "requires", "indicate", "prevent", "protect", "apply", "applies"};
    static constexpr std::string_view adjectives[] = {
        "visible", "new", "high", "low", "large", "small", "possible", "necessary", "available",
        "public", "private", "able", "free", "clear", "safe", "certain", "special", "general",
        "additional", "separate", "appropriate", "existing", "other", "such", "same", "different"};
    static constexpr std::string_view not_adverbs[] = {"supply", "assembly", "family", "rally", "anomaly",
                                                       "reply",  "fly",      "italy",  "jelly", "belly"};
    static constexpr std::string_view not_participles[] = {"bed", "shed", "speed", "seed", "need", "feed",
                                                           "weed", "red", "hundred", "sled", "steed"};

    if (all_digits(w)) return Pos::Number;
    if (in(modals, w) || in(be, w) || in(verbs, w)) return Pos::Verb;
    if (in(adjectives, w)) return Pos::Adjective;
    if (stop.count(std::string(w))) return Pos::Other;
    if (in(modals, prev)) return Pos::Verb;
    if (w.size() >= 7 && (ends(w, "able") || ends(w, "ible"))) return Pos::Adjective;
    if (w.size() > 4 && (ends(w, "ous") || ends(w, "ful") || ends(w, "less") || ends(w, "ive")))
        return Pos::Adjective;
    if (w.size() > 3 && ends(w, "ly") && !in(not_adverbs, w)) return Pos::Adverb;
    if (w.size() > 3 && ends(w, "ed") && !in(not_participles, w)) return Pos::Verb;
    if (w.size() > 4 && ends(w, "ing") && in(be, prev)) return Pos::Verb;
    return Pos::Noun;
}

Pos tag_swedish(std::string_view w, std::string_view prev, const StopWords& stop) {
    static constexpr std::string_view modals[] = {"ska", "skall", "måste", "bör", "får", "kan", "skulle"};
    if (all_digits(w)) return Pos::Number;
    if (in(modals, w)) return Pos::Verb;
    if (stop.count(std::string(w))) return Pos::Other;
    if (in(modals, prev)) return Pos::Verb;
    static constexpr std::string_view adj_suffixes[] = {"lig", "liga", "ligt", "isk", "iska", "iskt"};
    for (auto s : adj_suffixes)
        if (w.size() > s.size() + 2 && ends(w, s)) return Pos::Adjective;
    return Pos::Noun;
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(std::string("cannot open ") + what + " '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view to_string(Pos p) {
    switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adjective: return "ADJ";
    case Pos::Adverb: return "ADV";
    case Pos::Number: return "NUM";
    case Pos::Other: return "OTHER";
    }
    return "OTHER";
}

Pos parse_pos(std::string_view tag) {
    std::string t(tag);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
    if (t == "NOUN" || t == "PROPN" || t.rfind("NN", 0) == 0) return Pos::Noun;
    if (t == "VERB" || t == "AUX" || t == "MD" || t.rfind("VB", 0) == 0) return Pos::Verb;
    if (t == "ADJ" || t.rfind("JJ", 0) == 0) return Pos::Adjective;
    if (t == "ADV" || t.rfind("RB", 0) == 0) return Pos::Adverb;
    if (t == "NUM" || t == "CD") return Pos::Number;
    return Pos::Other;
}

std::string aggregate_requirement(const Requirement& r) {
    std::string out;
    for (const auto* part : {&r.document_title, &r.section_title, &r.text}) {
        if (part->empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += *part;
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::u32string current;
    auto flush = [&] {
        if (!current.empty()) {
            out.push_back(utf8::encode(current));
            current.clear();
        }
    };
    for (char32_t c : utf8::decode(text)) {
        if (utf8::is_alnum(c))
            current.push_back(utf8::to_lower(c));
        else
            flush();
    }
    flush();
    return out;
}

StopWords builtin_stop_words(std::string_view language) {
    if (language == "en") return StopWords(std::begin(kEnglishStopWords), std::end(kEnglishStopWords));
    if (language == "sv") return StopWords(std::begin(kSwedishStopWords), std::end(kSwedishStopWords));
    throw DomainError("unsupported language code '" + std::string(language) + "' (expected en or sv)");
}

StopWords load_stop_words(const std::string& path) {
    auto content = read_file(path, "stop-word list");
    StopWords words;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        for (auto& w : tokenize(line)) words.insert(std::move(w));
    }
    return words;
}

HeuristicTagger::HeuristicTagger(std::string language) : language_(std::move(language)) {
    if (language_ != "en" && language_ != "sv")
        throw DomainError("unsupported language code '" + language_ + "' (expected en or sv)");
}

std::vector<Pos> HeuristicTagger::tag(std::span<const std::string> words, std::string_view) const {
    static const StopWords en = builtin_stop_words("en");
    static const StopWords sv = builtin_stop_words("sv");
    std::vector<Pos> tags;
    tags.reserve(words.size());
    std::string_view prev;
    for (const auto& w : words) {
        tags.push_back(language_ == "en" ? tag_english(w, prev, en) : tag_swedish(w, prev, sv));
        prev = w;
    }
    return tags;
}

SidecarTagger::SidecarTagger(std::map<std::string, std::map<std::size_t, Pos>> tags,
                             std::shared_ptr<const PosTagger> fallback)
    : tags_(std::move(tags)), fallback_(std::move(fallback)) {}

std::vector<Pos> SidecarTagger::tag(std::span<const std::string> words, std::string_view source) const {
    auto it = tags_.find(std::string(source));
    if (it == tags_.end()) {
        if (fallback_) return fallback_->tag(words, source);
        return std::vector<Pos>(words.size(), Pos::Other);
    }
    std::vector<Pos> out(words.size(), Pos::Other);
    for (const auto& [index, pos] : it->second) {
        if (index >= words.size())
            throw ParseError("POS sidecar tags token " + std::to_string(index) + " of '" + it->first +
                             "', which has only " + std::to_string(words.size()) + " tokens");
        out[index] = pos;
    }
    return out;
}

std::map<std::string, std::map<std::size_t, Pos>> parse_pos_sidecar(std::string_view content) {
    std::map<std::string, std::map<std::size_t, Pos>> out;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string id, index, tag;
        if (!std::getline(fields, id, '\t') || !std::getline(fields, index, '\t') || !std::getline(fields, tag, '\t') ||
            id.empty() || !all_digits(index) || tag.empty())
            throw ParseError("malformed POS sidecar line " + std::to_string(line_no) +
                             ": expected requirement_id<TAB>token_index<TAB>tag");
        out[id][std::stoul(index)] = parse_pos(tag);
    }
    return out;
}

std::map<std::string, std::map<std::size_t, Pos>> load_pos_sidecar(const std::string& path) {
    return parse_pos_sidecar(read_file(path, "POS sidecar"));
}

TextPipeline::TextPipeline(const PipelineOptions& options)
    : language_(options.language),
      stop_words_(options.stop_words_path.empty() ? builtin_stop_words(options.language)
                                                  : load_stop_words(options.stop_words_path)),
      stemmer_(make_stemmer(options.language)) {
    auto heuristic = std::make_shared<HeuristicTagger>(language_);
    if (options.pos_sidecar_path.empty())
        tagger_ = heuristic;
    else
        tagger_ = std::make_shared<SidecarTagger>(load_pos_sidecar(options.pos_sidecar_path), heuristic);
}

TextPipeline::TextPipeline(std::string language, StopWords stop_words, std::shared_ptr<const PosTagger> tagger)
    : language_(std::move(language)),
      stop_words_(std::move(stop_words)),
      stemmer_(make_stemmer(language_)),
      tagger_(tagger ? std::move(tagger) : std::make_shared<HeuristicTagger>(language_)) {}

TokenizedText TextPipeline::preprocess(std::string_view text, std::string_view source) const {
    TokenizedText out;
    out.source = std::string(source);
    auto words = tokenize(text);
    auto tags = tagger_->tag(words, source);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (stop_words_.count(words[i])) continue;
        out.tokens.push_back(Token{words[i], stemmer_->stem(words[i]), tags[i]});
    }
    return out;
}

std::vector<Token> extract_nouns(const TokenizedText& t) {
    std::vector<Token> nouns;
    std::copy_if(t.tokens.begin(), t.tokens.end(), std::back_inserter(nouns),
                 [](const Token& tok) { return tok.pos == Pos::Noun; });
    return nouns;
}

std::vector<Requirement> parse_requirements(std::string_view content) {
    if (content.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("requirements JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("requirements file must hold a JSON array");
    std::vector<Requirement> out;
    std::size_t index = 0;
    for (const auto& rec : doc) {
        ++index;
        auto where = "requirement record " + std::to_string(index);
        if (!rec.is_object()) throw ParseError(where + " is not an object");
        auto field = [&](const char* key) -> std::string {
            if (!rec.contains(key) || rec[key].is_null()) return {};
            if (!rec[key].is_string()) throw ParseError(where + ": '" + key + "' must be a string");
            return rec[key].get<std::string>();
        };
        Requirement r{field("id"), field("text"), field("document_title"), field("section_title")};
        if (r.id.empty()) throw ParseError(where + ": missing 'id'");
        if (r.text.empty()) throw ParseError(where + " ('" + r.id + "'): empty text");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Requirement> load_requirements(const std::string& path) {
    try {
        return parse_requirements(read_file(path, "requirements file"));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace reqclass
