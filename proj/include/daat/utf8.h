#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace daat::utf8 {

// Throws DecodeError(line) on malformed input, overlong forms and surrogates.
std::u32string decode(std::string_view bytes, std::size_t line = 0);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t c);

bool is_space(char32_t c);

}  // namespace daat::utf8
