#pragma once

#include <string>
#include <vector>

#include "lexsimp/core.hpp"
#include "lexsimp/providers.hpp"

namespace lexsimp {

/// Sentence S, its masked copy S', and the encoded pair fed to the LM.
///
/// The pair uses the RoBERTa sentence-pair layout
///   <s>S</s></s>S'</s>
/// and mask_position is the byte offset of the placeholder inside that
/// encoding (always within the S' segment).
struct MaskedPair {
  std::string original;
  std::string masked;
  MaskedText encoded;
  ByteSpan target;  // span of the complex word in `original`
};

/// Throws TargetNotFound when the complex word cannot be located.
MaskedPair build_masked_pair(const Instance& instance);

/// Over-query factor applied to k_generate before filtering.
inline constexpr int kOverQueryFactor = 4;

/// Candidate substitutes for the masked slot, most probable first.
///
/// The provider is asked for k_generate * 4 words; the target itself, its
/// morphological variants, non-alphabetic tokens and case-insensitive
/// duplicates are removed and the first k_generate survivors returned,
/// lowercased. Throws EmptyCandidateSet when nothing survives.
std::vector<Candidate> generate_candidates(const MaskedPair& pair, const Instance& instance,
                                           const MaskedLMProvider& lm, int k_generate = 30);

}  // namespace lexsimp
