#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lexsimp::text {

/// FNV-1a, 64 bit, over the raw bytes of `bytes`.
std::uint64_t fnv1a64(std::string_view bytes);

/// (fnv1a64(bytes) mod 1000) / 1000, i.e. a value in [0, 0.999].
double hash_unit(std::string_view bytes);

bool is_valid_utf8(std::string_view s);

/// Full Unicode default lowercasing (root locale).
std::string to_lower(std::string_view s);

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

/// Single code point lowercase mapping.
char32_t simple_lower(char32_t c);

bool is_letter(char32_t c);
bool is_alnum(char32_t c);
bool is_space(char32_t c);

/// Letters (general category L) with optional internal hyphens or apostrophes.
bool is_word_token(std::string_view s);

/// Byte offset of the code point at index `cp_index`; s.size() if past the end.
std::size_t byte_offset(std::string_view s, std::size_t cp_index);

/// Whitespace-separated tokens with their byte spans.
struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<Token> whitespace_tokens(std::string_view s);

/// Byte span of the word inside a token after stripping leading and trailing
/// non-alphanumeric characters. Empty when the token holds no letters or digits.
Token word_core(std::string_view s, Token tok);

}  // namespace lexsimp::text
