#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace temponym::utf8 {

// Decodes the code point starting at `pos` and stores its byte length in
// `length`. Invalid sequences decode as U+FFFD with length 1.
char32_t decode(std::string_view text, std::size_t pos, std::size_t& length);

void append(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_digit(char32_t cp);
bool is_upper(char32_t cp);
// Letters and digits, including non-ASCII letters. Everything else that is
// not whitespace counts as punctuation.
bool is_word(char32_t cp);

// Lower-cases ASCII and Latin-1 letters; other code points pass through.
std::string to_lower(std::string_view text);

// True when `pos` does not fall inside a multi-byte sequence.
bool is_boundary(std::string_view text, std::size_t pos);

// prefix[i] = number of code points starting before byte i. At code point
// boundaries this is the code point offset of i.
std::vector<std::size_t> codepoint_prefix(std::string_view text);

}  // namespace temponym::utf8
