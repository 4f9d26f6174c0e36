#pragma once

#include <string>
#include <string_view>

namespace reqclass::utf8 {

/// Decodes UTF-8; malformed bytes map to U+FFFD.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
std::string encode(char32_t c);

std::size_t length(std::string_view s);

bool is_alnum(char32_t c);
char32_t to_lower(char32_t c);

}  // namespace reqclass::utf8

namespace reqclass::utf8 {
std::string to_lower(std::string_view s);
}  // namespace reqclass::utf8
