#pragma once

#include <string>
#include <string_view>

namespace lexsimp {

/// Porter (1980) suffix-stripping stemmer for lowercase English words.
/// Words shorter than three characters, or containing anything other than
/// ASCII a-z, are returned unchanged.
std::string porter_stem(std::string_view word);

/// True if `candidate` is a morphological variant of `target`: equal Porter
/// stems, or one string is the other plus one of s/es/ed/d/ing/er/est.
/// Both arguments are expected lowercased.
bool is_morphological_variant(std::string_view target, std::string_view candidate);

}  // namespace lexsimp
