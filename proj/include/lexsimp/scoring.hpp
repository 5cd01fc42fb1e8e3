#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexsimp/core.hpp"
#include "lexsimp/providers.hpp"

namespace lexsimp {

struct ScoredCandidate {
  Candidate candidate;
  FeatureScores scores;
};

/// The instance sentence with the complex word replaced by `surface`.
std::string substitute(const Instance& instance, std::string_view surface);

/// Masked-LM probability recorded at generation time.
inline double score_b(const Candidate& candidate) { return candidate.gen_prob; }

struct ContextLoss {
  double loss = 0.0;
  int positions = 0;        // context words evaluated
  bool degenerate = false;  // no context word; loss is 0 by convention
};

/// Average masked-LM loss of the context words around the substituted
/// candidate: for each whitespace token within m positions of the target
/// (punctuation stripped, punctuation-only tokens skipped), mask it and take
/// -log p(word | rest). Lower is better.
ContextLoss score_l(const Instance& instance, const Candidate& candidate, const MaskedLMProvider& lm,
                    int m = 5);

/// Cosine similarity; 0 when either vector is all zero. Throws
/// ProviderFailure on a length mismatch between two nonzero vectors.
double cosine(std::span<const double> u, std::span<const double> v);

/// Cosine of the embeddings of the lowercased target and candidate.
double score_sim(std::string_view target_word, const Candidate& candidate, const EmbeddingProvider& emb);

/// Lexicon value of the candidate, absent when out of vocabulary.
std::optional<double> score_lexicon(const Candidate& candidate, const Lexicon& lexicon);

struct Equivalence {
  double forward = 0.0;   // En(S, S')
  double backward = 0.0;  // En(S', S)
  double value = 0.0;     // forward * backward
};

/// Mutual entailment between the sentence and its substituted variant.
/// Makes exactly two provider calls.
Equivalence equivalence(const Instance& instance, const Candidate& candidate, const NLIProvider& nli);

inline double equivalence_score(const Instance& instance, const Candidate& candidate, const NLIProvider& nli) {
  return equivalence(instance, candidate, nli).value;
}

/// Computes the requested features for every candidate. b is always filled.
/// Throws MissingFeature when a requested feature has no backing provider or
/// lexicon.
std::vector<ScoredCandidate> score_candidates(const Instance& instance, const std::vector<Candidate>& candidates,
                                              const ProviderSet& providers, std::span<const Feature> features,
                                              int context_window_m = 5);

}  // namespace lexsimp
