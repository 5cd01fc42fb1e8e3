#include "lexsimp/providers.hpp"

#include <algorithm>
#include <cmath>

#include "lexsimp/error.hpp"
#include "lexsimp/text.hpp"

namespace lexsimp {

void check_single_mask(const MaskedText& input) {
  const std::size_t first = input.text.find(kMaskToken);
  if (first == std::string::npos) throw ProviderFailure("input has no mask placeholder");
  if (input.text.find(kMaskToken, first + 1) != std::string::npos) {
    throw ProviderFailure("input has more than one mask placeholder");
  }
  if (first != input.mask_offset) {
    throw ProviderFailure("mask offset " + std::to_string(input.mask_offset) +
                          " does not match placeholder at " + std::to_string(first));
  }
}

std::vector<ScoredWord> select_topk_words(std::vector<ScoredWord> raw, int k) {
  std::map<std::string, double> best;
  for (ScoredWord& entry : raw) {
    std::string_view w = entry.word;
    // Continuation pieces (WordPiece) are never whole words.
    if (w.starts_with("##")) continue;
    // RoBERTa/GPT-2 "Ġ" and SentencePiece "▁" word-start markers.
    for (std::string_view marker : {std::string_view("\xC4\xA0"), std::string_view("\xE2\x96\x81")}) {
      if (w.starts_with(marker)) w.remove_prefix(marker.size());
    }
    if (!text::is_word_token(w)) continue;
    auto [it, inserted] = best.emplace(std::string(w), entry.prob);
    if (!inserted) it->second = std::max(it->second, entry.prob);
  }
  std::vector<ScoredWord> out;
  out.reserve(best.size());
  for (auto& [word, prob] : best) out.push_back({word, prob});
  std::stable_sort(out.begin(), out.end(), [](const ScoredWord& a, const ScoredWord& b) {
    return a.prob > b.prob;
  });
  if (k >= 0 && out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
  return out;
}

Lexicon::Lexicon(std::string name, const std::map<std::string, double>& table) : name_(std::move(name)) {
  for (const auto& [word, value] : table) {
    if (!std::isfinite(value)) throw DataError("lexicon '" + name_ + "': non-finite value for '" + word + "'");
    table_[text::to_lower(word)] = value;
  }
}

std::optional<double> Lexicon::lookup(std::string_view word) const {
  auto it = table_.find(word);
  if (it == table_.end()) it = table_.find(text::to_lower(word));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& default_stub_vocabulary() {
  static const std::vector<std::string> kWords{
      "able",    "big",      "large",   "huge",     "vast",     "small",    "little",  "good",
      "bad",     "new",      "old",     "great",    "high",     "low",      "long",    "short",
      "easy",    "hard",     "simple",  "clear",    "plain",    "basic",    "main",    "key",
      "needed",  "required", "forced",  "mandatory", "necessary", "important", "essential", "vital",
      "usual",   "normal",   "common",  "general",  "public",   "open",     "free",    "full",
      "whole",   "complete", "total",   "final",    "last",     "first",    "early",   "late",
      "quick",   "fast",     "slow",    "safe",     "sure",     "certain",  "real",    "true",
      "right",   "wrong",    "fair",    "strong",   "weak",     "rich",     "poor",    "cheap",
      "costly",  "dear",     "close",   "near",     "far",      "deep",     "wide",    "broad",
      "bright",  "dark",     "light",   "heavy",    "warm",     "cold",     "hot",     "cool",
      "calm",    "quiet",    "loud",    "kind",     "nice",     "happy",    "sad",     "angry",
      "afraid",  "proud",    "busy",    "ready",    "careful",  "helpful",  "useful",  "harmful",
      "told",    "asked",    "made",    "given",    "shown",    "said",     "used",    "held",
      "bought",  "sold",     "sent",    "kept",     "left",     "found",    "lost",    "won",
      "start",   "begin",    "end",     "stop",     "help",     "show",     "make",    "take",
      "give",    "get",      "keep",    "let",      "put",      "set",      "run",     "walk",
      "move",    "change",   "grow",    "fall",     "rise",     "drop",     "cut",     "add",
      "buy",     "sell",     "pay",     "spend",    "save",     "lose",     "win",     "try",
      "people",  "person",   "group",   "team",     "bank",     "money",    "help",    "plan",
      "idea",    "way",      "part",    "place",    "home",     "house",    "city",    "country",
      "state",   "world",    "life",    "work",     "job",      "time",     "year",    "day",
      "also",    "often",    "always",  "never",    "again",    "soon",     "now",     "then",
      "very",    "really",   "quite",   "rather",   "almost",   "just",     "only",    "even",
      "the",     "a",        "and",     "of",       "to",       "in",       ",",       ".",
      "##ing",   "2022",     "e-mail",  "don't",
  };
  return kWords;
}

StubMaskedLM::StubMaskedLM(std::vector<std::string> vocabulary, std::size_t max_sequence_bytes)
    : vocabulary_(std::move(vocabulary)), max_sequence_bytes_(max_sequence_bytes) {}

LmCapabilities StubMaskedLM::capabilities() const {
  return {"stub-fnv1a64", max_sequence_bytes_};
}

std::vector<ScoredWord> StubMaskedLM::masked_topk(const MaskedText& input, int k) const {
  if (k < 1) throw ProviderFailure("masked_topk: k must be positive");
  check_single_mask(input);
  if (input.text.size() > max_sequence_bytes_) {
    throw SequenceTooLong("input of " + std::to_string(input.text.size()) + " bytes exceeds " +
                          std::to_string(max_sequence_bytes_));
  }
  std::vector<ScoredWord> raw;
  raw.reserve(vocabulary_.size());
  for (const std::string& w : vocabulary_) raw.push_back({w, text::hash_unit(w)});
  return select_topk_words(std::move(raw), k);
}

double StubMaskedLM::word_probability(const MaskedText& input, std::string_view word) const {
  check_single_mask(input);
  if (input.text.size() > max_sequence_bytes_) {
    throw SequenceTooLong("input of " + std::to_string(input.text.size()) + " bytes exceeds " +
                          std::to_string(max_sequence_bytes_));
  }
  std::string key = input.text;
  key += '|';
  key += word;
  const std::uint64_t bucket = std::max<std::uint64_t>(text::fnv1a64(key) % 1000, 1);
  return static_cast<double>(bucket) / 1000.0;
}

double StubNLI::entail_prob(std::string_view premise, std::string_view hypothesis) const {
  if (premise.empty() || hypothesis.empty()) throw ProviderFailure("entail_prob: empty text");
  if (identical_is_entailed_ && premise == hypothesis) return 1.0;
  std::string key(premise);
  key += "\xE2\x86\x92";  // U+2192
  key += hypothesis;
  return text::hash_unit(key);
}

std::vector<double> StubEmbedding::embed(std::string_view word) const {
  if (word.empty()) throw ProviderFailure("embed: empty word");
  std::vector<double> v(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    std::string key(word);
    key += '#';
    key += std::to_string(i);
    v[i] = 2.0 * text::hash_unit(key) - 1.0;
  }
  return v;
}

Lexicon make_stub_lexicon(const std::string& name, const std::vector<std::string>& words) {
  std::map<std::string, double> table;
  for (const std::string& w : words) {
    if (!text::is_word_token(w)) continue;
    // Roughly one word in five is left out so lookups can miss.
    if (text::fnv1a64(name + "?" + w) % 5 == 0) continue;
    table[w] = text::hash_unit(name + ":" + w);
  }
  return Lexicon(name, table);
}

TableEmbedding::TableEmbedding(std::size_t dimension,
                               std::map<std::string, std::vector<double>, std::less<>> table)
    : dimension_(dimension), table_(std::move(table)) {
  for (const auto& [word, v] : table_) {
    if (v.size() != dimension_) {
      throw DataError("embedding for '" + word + "' has " + std::to_string(v.size()) +
                      " components, expected " + std::to_string(dimension_));
    }
  }
}

std::vector<double> TableEmbedding::embed(std::string_view word) const {
  const auto it = table_.find(word);
  if (it == table_.end()) return std::vector<double>(dimension_, 0.0);
  return it->second;
}

namespace {

class SerializedLM final : public MaskedLMProvider {
 public:
  explicit SerializedLM(std::shared_ptr<const MaskedLMProvider> inner) : inner_(std::move(inner)) {}

  LmCapabilities capabilities() const override { return inner_->capabilities(); }
  std::vector<ScoredWord> masked_topk(const MaskedText& input, int k) const override {
    std::lock_guard lock(mu_);
    return inner_->masked_topk(input, k);
  }
  double word_probability(const MaskedText& input, std::string_view word) const override {
    std::lock_guard lock(mu_);
    return inner_->word_probability(input, word);
  }

 private:
  std::shared_ptr<const MaskedLMProvider> inner_;
  mutable std::mutex mu_;
};

class SerializedNLI final : public NLIProvider {
 public:
  explicit SerializedNLI(std::shared_ptr<const NLIProvider> inner) : inner_(std::move(inner)) {}

  double entail_prob(std::string_view premise, std::string_view hypothesis) const override {
    std::lock_guard lock(mu_);
    return inner_->entail_prob(premise, hypothesis);
  }

 private:
  std::shared_ptr<const NLIProvider> inner_;
  mutable std::mutex mu_;
};

class SerializedEmbedding final : public EmbeddingProvider {
 public:
  explicit SerializedEmbedding(std::shared_ptr<const EmbeddingProvider> inner) : inner_(std::move(inner)) {}

  std::size_t dimension() const override {
    std::lock_guard lock(mu_);
    return inner_->dimension();
  }
  std::vector<double> embed(std::string_view word) const override {
    std::lock_guard lock(mu_);
    return inner_->embed(word);
  }

 private:
  std::shared_ptr<const EmbeddingProvider> inner_;
  mutable std::mutex mu_;
};

}  // namespace

ProviderSet serialize_non_concurrent(ProviderSet providers) {
  if (providers.lm && !providers.lm->concurrent()) {
    providers.lm = std::make_shared<SerializedLM>(providers.lm);
  }
  if (providers.nli && !providers.nli->concurrent()) {
    providers.nli = std::make_shared<SerializedNLI>(providers.nli);
  }
  if (providers.embeddings && !providers.embeddings->concurrent()) {
    providers.embeddings = std::make_shared<SerializedEmbedding>(providers.embeddings);
  }
  return providers;
}

ProviderSet make_stub_providers() {
  ProviderSet set;
  set.lm = std::make_shared<StubMaskedLM>();
  set.nli = std::make_shared<StubNLI>();
  set.embeddings = std::make_shared<StubEmbedding>();
  const auto& vocab = default_stub_vocabulary();
  set.freq = make_stub_lexicon("freq", vocab);
  set.wp_crowd = make_stub_lexicon("wp_crowd", vocab);
  set.wp_corp = make_stub_lexicon("wp_corp", vocab);
  return set;
}

}  // namespace lexsimp
