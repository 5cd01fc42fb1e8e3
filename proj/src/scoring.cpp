#include "lexsimp/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "lexsimp/error.hpp"
#include "lexsimp/text.hpp"

namespace lexsimp {

namespace {

// Floor for probabilities reported as zero, so the loss stays finite.
constexpr double kMinProbability = 1e-12;

}  // namespace

std::string substitute(const Instance& instance, std::string_view surface) {
  const ByteSpan span = locate_target_bytes(instance);
  const std::string& s = instance.sentence();
  std::string out = s.substr(0, span.begin);
  out += surface;
  out += s.substr(span.end);
  return out;
}

ContextLoss score_l(const Instance& instance, const Candidate& candidate, const MaskedLMProvider& lm, int m) {
  if (m < 1) throw DataError("context window must be positive");
  const ByteSpan span = locate_target_bytes(instance);
  const std::string sentence = substitute(instance, candidate.surface);
  const std::size_t cand_begin = span.begin;

  const std::vector<text::Token> tokens = text::whitespace_tokens(sentence);
  std::size_t center = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].begin <= cand_begin && cand_begin < tokens[i].end) {
      center = i;
      break;
    }
  }
  ContextLoss result;
  if (center == tokens.size()) {
    result.degenerate = true;
    return result;
  }

  const std::size_t lo = center >= static_cast<std::size_t>(m) ? center - static_cast<std::size_t>(m) : 0;
  const std::size_t hi = std::min(tokens.size() - 1, center + static_cast<std::size_t>(m));
  double total = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j == center) continue;
    const text::Token core = text::word_core(sentence, tokens[j]);
    if (core.begin == core.end) continue;
    const std::string word = sentence.substr(core.begin, core.end - core.begin);
    MaskedText masked;
    masked.text = sentence.substr(0, core.begin);
    masked.mask_offset = masked.text.size();
    masked.text += kMaskToken;
    masked.text += sentence.substr(core.end);
    const double p = std::max(lm.word_probability(masked, word), kMinProbability);
    total += -std::log(p);
    ++result.positions;
  }
  if (result.positions == 0) {
    result.degenerate = true;
    return result;
  }
  result.loss = total / result.positions;
  return result;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  auto is_zero = [](std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double c) { return c == 0.0; });
  };
  if (is_zero(u) || is_zero(v)) return 0.0;
  if (u.size() != v.size()) throw ProviderFailure("embedding vectors differ in length");
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double score_sim(std::string_view target_word, const Candidate& candidate, const EmbeddingProvider& emb) {
  const std::vector<double> u = emb.embed(text::to_lower(target_word));
  const std::vector<double> v = emb.embed(candidate.surface);
  return cosine(u, v);
}

std::optional<double> score_lexicon(const Candidate& candidate, const Lexicon& lexicon) {
  return lexicon.lookup(candidate.surface);
}

Equivalence equivalence(const Instance& instance, const Candidate& candidate, const NLIProvider& nli) {
  const std::string& original = instance.sentence();
  const std::string variant = substitute(instance, candidate.surface);
  Equivalence eq;
  eq.forward = nli.entail_prob(original, variant);
  eq.backward = nli.entail_prob(variant, original);
  for (double p : {eq.forward, eq.backward}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ProviderFailure("entailment probability outside [0,1]");
  }
  eq.value = eq.forward * eq.backward;
  return eq;
}

namespace {

const Lexicon& require_lexicon(const std::optional<Lexicon>& lex, Feature f) {
  if (!lex) throw MissingFeature("no lexicon loaded for feature '" + std::string(feature_name(f)) + "'");
  return *lex;
}

}  // namespace

std::vector<ScoredCandidate> score_candidates(const Instance& instance, const std::vector<Candidate>& candidates,
                                              const ProviderSet& providers, std::span<const Feature> features,
                                              int context_window_m) {
  auto wants = [&](Feature f) { return std::find(features.begin(), features.end(), f) != features.end(); };
  if (wants(Feature::l) && !providers.lm) throw MissingFeature("feature 'l' needs a masked LM");
  if (wants(Feature::sim) && !providers.embeddings) throw MissingFeature("feature 'sim' needs embeddings");
  if (wants(Feature::eq) && !providers.nli) throw MissingFeature("feature 'eq' needs an NLI model");

  std::vector<ScoredCandidate> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    ScoredCandidate sc{c, {}};
    sc.scores.b_prob = score_b(c);
    if (wants(Feature::l)) {
      const ContextLoss l = score_l(instance, c, *providers.lm, context_window_m);
      sc.scores.l_loss = l.loss;
      sc.scores.l_degenerate = l.degenerate;
    }
    if (wants(Feature::sim)) sc.scores.sim = score_sim(instance.complex_word(), c, *providers.embeddings);
    if (wants(Feature::freq)) sc.scores.freq = score_lexicon(c, require_lexicon(providers.freq, Feature::freq));
    if (wants(Feature::wp_crowd)) {
      sc.scores.wp_crowd = score_lexicon(c, require_lexicon(providers.wp_crowd, Feature::wp_crowd));
    }
    if (wants(Feature::wp_corp)) {
      sc.scores.wp_corp = score_lexicon(c, require_lexicon(providers.wp_corp, Feature::wp_corp));
    }
    if (wants(Feature::eq)) sc.scores.eq = equivalence_score(instance, c, *providers.nli);
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace lexsimp
