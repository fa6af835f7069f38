#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lexbias {

// Unicode simple case folding, applied code point by code point. The result
// has the same number of code points as the input, so folding commutes with
// taking prefixes. Invalid UTF-8 bytes are passed through unchanged.
std::string casefold(std::string_view utf8);

// Splits on ASCII whitespace; punctuation stays attached to its word.
std::vector<std::string> split_whitespace(std::string_view text);

// Byte offsets of every code point boundary strictly inside (0, size].
std::vector<std::size_t> codepoint_ends(std::string_view utf8);

std::string join(const std::vector<std::string>& words, std::string_view sep = " ");

}  // namespace lexbias
