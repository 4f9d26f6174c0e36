#include "reqclass/stemmer.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "reqclass/error.hpp"
#include "reqclass/utf8.hpp"

namespace reqclass {

namespace {

// ---------------------------------------------------------------- Porter

class PorterWord {
public:
    explicit PorterWord(std::string w) : b_(std::move(w)) {}

    std::string take() { return std::move(b_); }

    void run() {
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
    }

private:
    std::string b_;

    bool consonant(std::size_t i) const {
        switch (b_[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 || !consonant(i - 1);
        default:
            return true;
        }
    }

    // m() of the first `len` characters.
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && consonant(i)) ++i;
        while (i < len) {
            while (i < len && !consonant(i)) ++i;
            if (i >= len) break;
            while (i < len && consonant(i)) ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i)
            if (!consonant(i)) return true;
        return false;
    }

    bool double_consonant(std::size_t len) const {
        return len >= 2 && b_[len - 1] == b_[len - 2] && consonant(len - 1);
    }

    // *o: stem ends consonant-vowel-consonant, last not w, x or y.
    bool cvc(std::size_t len) const {
        if (len < 3) return false;
        if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) return false;
        char c = b_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view s) const {
        return b_.size() >= s.size() && std::string_view(b_).substr(b_.size() - s.size()) == s;
    }

    std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

    void replace(std::string_view suffix, std::string_view with) {
        b_.resize(stem_len(suffix));
        b_.append(with);
    }

    void step1a() {
        if (ends("sses"))
            replace("sses", "ss");
        else if (ends("ies"))
            replace("ies", "i");
        else if (ends("ss"))
            return;
        else if (ends("s"))
            replace("s", "");
    }

    void step1b() {
        if (ends("eed")) {
            if (measure(stem_len("eed")) > 0) replace("eed", "ee");
            return;
        }
        bool cut = false;
        if (ends("ed") && has_vowel(stem_len("ed"))) {
            replace("ed", "");
            cut = true;
        } else if (ends("ing") && has_vowel(stem_len("ing"))) {
            replace("ing", "");
            cut = true;
        }
        if (!cut) return;
        if (ends("at") || ends("bl") || ends("iz")) {
            b_.push_back('e');
        } else if (double_consonant(b_.size())) {
            char c = b_.back();
            if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
        } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
            b_.push_back('e');
        }
    }

    void step1c() {
        if (ends("y") && has_vowel(stem_len("y"))) b_.back() = 'i';
    }

    // Longest matching suffix decides; if its condition fails nothing else applies.
    template <std::size_t N>
    void apply_rules(const std::array<std::pair<std::string_view, std::string_view>, N>& rules, int min_m) {
        const std::pair<std::string_view, std::string_view>* best = nullptr;
        for (const auto& r : rules)
            if (ends(r.first) && (!best || r.first.size() > best->first.size())) best = &r;
        if (best && measure(stem_len(best->first)) > min_m) replace(best->first, best->second);
    }

    void step2() {
        static constexpr std::array<std::pair<std::string_view, std::string_view>, 20> rules{{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        }};
        apply_rules(rules, 0);
    }

    void step3() {
        static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> rules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_rules(rules, 0);
    }

    void step4() {
        static constexpr std::array<std::string_view, 19> suffixes{
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
            "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize"};
        std::string_view best;
        for (auto s : suffixes)
            if (ends(s) && s.size() > best.size()) best = s;
        if (best.empty()) return;
        auto len = stem_len(best);
        if (measure(len) <= 1) return;
        if (best == "ion" && !(len > 0 && (b_[len - 1] == 's' || b_[len - 1] == 't'))) return;
        b_.resize(len);
    }

    void step5a() {
        if (!ends("e")) return;
        auto len = stem_len("e");
        int m = measure(len);
        if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
    }

    void step5b() {
        if (measure(b_.size()) > 1 && double_consonant(b_.size()) && b_.back() == 'l') b_.pop_back();
    }
};

// ---------------------------------------------------------------- Swedish

bool sv_vowel(char32_t c) {
    switch (c) {
    case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
    case U'ä': case U'å': case U'ö':
        return true;
    default:
        return false;
    }
}

bool ends_with(const std::u32string& w, std::u32string_view s, std::size_t limit) {
    return w.size() >= s.size() && w.size() - s.size() >= limit &&
           std::u32string_view(w).substr(w.size() - s.size()) == s;
}

std::size_t sv_r1(const std::u32string& w) {
    std::size_t p = w.size();
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (!sv_vowel(w[i]) && sv_vowel(w[i - 1])) {
            p = i + 1;
            break;
        }
    }
    return std::max<std::size_t>(p, 3);
}

}  // namespace

std::string PorterStemmer::stem(std::string_view word) const {
    if (std::any_of(word.begin(), word.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; }))
        return std::string(word);
    PorterWord w{std::string(word)};
    w.run();
    return w.take();
}

std::string SwedishStemmer::stem(std::string_view word) const {
    auto w = utf8::decode(word);
    const std::size_t r1 = sv_r1(w);
    if (r1 >= w.size()) return std::string(word);

    static const std::u32string_view step1[] = {
        U"heterna", U"hetens", U"anden", U"heten", U"heter", U"arnas", U"ernas", U"ornas", U"andes", U"arens",
        U"andet", U"arna", U"erna", U"orna", U"ande", U"arne", U"aste", U"aren", U"ades", U"erns",
        U"ade", U"are", U"ern", U"ens", U"het", U"ast", U"ad", U"en", U"ar", U"er",
        U"or", U"as", U"es", U"at", U"a", U"e"};
    std::u32string_view best;
    for (auto s : step1)
        if (s.size() > best.size() && ends_with(w, s, r1)) best = s;
    if (!best.empty()) {
        w.resize(w.size() - best.size());
    } else if (ends_with(w, U"s", r1) && w.size() >= 2) {
        static constexpr std::u32string_view s_ending = U"bcdfghjklmnoprtvy";
        if (s_ending.find(w[w.size() - 2]) != std::u32string_view::npos) w.pop_back();
    }

    static const std::u32string_view pairs[] = {U"dd", U"gd", U"nn", U"dt", U"gt", U"kt", U"tt"};
    for (auto p : pairs) {
        if (ends_with(w, p, r1)) {
            w.pop_back();
            break;
        }
    }

    if (ends_with(w, U"fullt", r1)) {
        w.pop_back();
    } else if (ends_with(w, U"löst", r1)) {
        w.pop_back();
    } else if (ends_with(w, U"lig", r1)) {
        w.resize(w.size() - 3);
    } else if (ends_with(w, U"els", r1) || ends_with(w, U"ig", r1)) {
        w.resize(w.size() - (ends_with(w, U"els", r1) ? 3 : 2));
    }
    return utf8::encode(w);
}

std::unique_ptr<Stemmer> make_stemmer(std::string_view language) {
    if (language == "en") return std::make_unique<PorterStemmer>();
    if (language == "sv") return std::make_unique<SwedishStemmer>();
    throw DomainError("unsupported language code '" + std::string(language) + "' (expected en or sv)");
}

}  // namespace reqclass
