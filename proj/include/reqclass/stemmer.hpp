#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace reqclass {

class Stemmer {
public:
    virtual ~Stemmer() = default;
    /// Input is a lowercased token.
    virtual std::string stem(std::string_view word) const = 0;
};

/// Original Porter (1980) algorithm. Words with non-ASCII bytes pass through.
class PorterStemmer final : public Stemmer {
public:
    std::string stem(std::string_view word) const override;
};

/// Snowball Swedish stemmer.
class SwedishStemmer final : public Stemmer {
public:
    std::string stem(std::string_view word) const override;
};

/// "en" or "sv"; throws DomainError otherwise.
std::unique_ptr<Stemmer> make_stemmer(std::string_view language);

}  // namespace reqclass
