#include "lexsimp/text.hpp"

#include <algorithm>

#include <unicode/uchar.h>
#include <unicode/locid.h>
#include <unicode/unistr.h>

namespace lexsimp::text {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double hash_unit(std::string_view bytes) {
  return static_cast<double>(fnv1a64(bytes) % 1000) / 1000.0;
}

namespace {

// Decodes one code point starting at s[i]. Returns the sequence length, or 0
// for an invalid or truncated sequence.
std::size_t decode_one(std::string_view s, std::size_t i, char32_t& out) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    out = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms, surrogates, out of range.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  out = cp;
  return len;
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp;
    const std::size_t n = decode_one(s, i, cp);
    if (n == 0) return false;
    i += n;
  }
  return true;
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp;
    std::size_t n = decode_one(s, i, cp);
    if (n == 0) {
      cp = 0xFFFD;
      n = 1;
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::string to_lower(std::string_view s) {
  bool ascii = true;
  for (unsigned char c : s) {
    if (c >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) {
    std::string out(s);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

char32_t simple_lower(char32_t c) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
}

bool is_letter(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_L_MASK) != 0;
}

bool is_alnum(char32_t c) {
  return is_letter(c) || u_isdigit(static_cast<UChar32>(c));
}

bool is_space(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

bool is_word_token(std::string_view s) {
  if (s.empty() || !is_valid_utf8(s)) return false;
  const std::u32string cps = decode_utf8(s);
  if (!is_letter(cps.front()) || !is_letter(cps.back())) return false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (is_letter(c)) continue;
    const bool joiner = c == U'-' || c == U'\'' || c == U'’';
    // Joiners must sit between two letters.
    if (!joiner || !is_letter(cps[i - 1]) || !is_letter(cps[i + 1])) return false;
  }
  return true;
}

std::size_t byte_offset(std::string_view s, std::size_t cp_index) {
  std::size_t i = 0;
  for (std::size_t n = 0; n < cp_index && i < s.size(); ++n) {
    char32_t cp;
    const std::size_t len = decode_one(s, i, cp);
    i += len == 0 ? 1 : len;
  }
  return std::min(i, s.size());
}

std::vector<Token> whitespace_tokens(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  bool in_token = false;
  Token cur;
  while (i < s.size()) {
    char32_t cp;
    std::size_t len = decode_one(s, i, cp);
    if (len == 0) {
      cp = 0xFFFD;
      len = 1;
    }
    if (is_space(cp)) {
      if (in_token) {
        cur.end = i;
        out.push_back(cur);
        in_token = false;
      }
    } else if (!in_token) {
      cur.begin = i;
      in_token = true;
    }
    i += len;
  }
  if (in_token) {
    cur.end = s.size();
    out.push_back(cur);
  }
  return out;
}

Token word_core(std::string_view s, Token tok) {
  const std::string_view piece = s.substr(tok.begin, tok.end - tok.begin);
  const std::u32string cps = decode_utf8(piece);
  std::size_t first = 0;
  while (first < cps.size() && !is_alnum(cps[first])) ++first;
  if (first == cps.size()) return {tok.begin, tok.begin};
  std::size_t last = cps.size();
  while (last > first && !is_alnum(cps[last - 1])) --last;
  const std::size_t b = tok.begin + byte_offset(piece, first);
  const std::size_t e = tok.begin + byte_offset(piece, last);
  return {b, e};
}

}  // namespace lexsimp::text
