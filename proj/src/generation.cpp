#include "lexsimp/generation.hpp"

#include <set>

#include "lexsimp/error.hpp"
#include "lexsimp/stemmer.hpp"
#include "lexsimp/text.hpp"

namespace lexsimp {

MaskedPair build_masked_pair(const Instance& instance) {
  MaskedPair pair;
  pair.original = instance.sentence();
  pair.target = locate_target_bytes(instance);
  pair.masked = pair.original.substr(0, pair.target.begin);
  pair.masked += kMaskToken;
  pair.masked += pair.original.substr(pair.target.end);

  std::string& enc = pair.encoded.text;
  enc = "<s>";
  enc += pair.original;
  enc += "</s></s>";
  const std::size_t second_segment = enc.size();
  enc += pair.masked;
  enc += "</s>";
  pair.encoded.mask_offset = second_segment + pair.target.begin;
  return pair;
}

std::vector<Candidate> generate_candidates(const MaskedPair& pair, const Instance& instance,
                                           const MaskedLMProvider& lm, int k_generate) {
  if (k_generate < 1) throw DataError("k_generate must be positive");
  const std::string target = text::to_lower(instance.complex_word());
  const std::vector<ScoredWord> raw = lm.masked_topk(pair.encoded, k_generate * kOverQueryFactor);

  std::vector<Candidate> out;
  std::set<std::string, std::less<>> seen;
  for (const ScoredWord& sw : raw) {
    if (!text::is_word_token(sw.word)) continue;
    std::string lowered = text::to_lower(sw.word);
    if (lowered == target || is_morphological_variant(target, lowered)) continue;
    if (!seen.insert(lowered).second) continue;
    out.push_back({std::move(lowered), sw.prob});
    if (out.size() == static_cast<std::size_t>(k_generate)) break;
  }
  if (out.empty()) {
    throw EmptyCandidateSet("no substitution candidate survived filtering for '" +
                            instance.complex_word() + "'");
  }
  return out;
}

}  // namespace lexsimp
