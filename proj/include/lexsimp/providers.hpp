#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexsimp {

inline constexpr std::string_view kMaskToken = "<mask>";

/// Text with exactly one mask placeholder at byte offset `mask_offset`.
struct MaskedText {
  std::string text;
  std::size_t mask_offset = 0;
};

/// Throws ProviderFailure unless `input` holds exactly one mask placeholder
/// and it sits at `mask_offset`.
void check_single_mask(const MaskedText& input);

struct ScoredWord {
  std::string word;
  double prob = 0.0;
  friend bool operator==(const ScoredWord&, const ScoredWord&) = default;
};

/// Normalizes raw vocabulary entries into a top-k word list: strips leading
/// subword-space markers, drops continuation pieces, punctuation, numerals
/// and multiword entries, merges duplicates (keeping the highest
/// probability), then orders by probability descending and word ascending.
std::vector<ScoredWord> select_topk_words(std::vector<ScoredWord> raw, int k);

struct LmCapabilities {
  std::string vocab_kind;
  std::size_t max_sequence_bytes = 0;
};

class MaskedLMProvider {
 public:
  virtual ~MaskedLMProvider() = default;

  virtual LmCapabilities capabilities() const = 0;

  /// Up to k whole words for the mask slot, sorted by (prob desc, word asc).
  virtual std::vector<ScoredWord> masked_topk(const MaskedText& input, int k) const = 0;

  /// Probability of `word` filling the mask slot.
  virtual double word_probability(const MaskedText& input, std::string_view word) const = 0;

  /// False when calls must be serialized by the caller.
  virtual bool concurrent() const { return true; }
};

class NLIProvider {
 public:
  virtual ~NLIProvider() = default;

  /// P(entailment | premise, hypothesis), in [0, 1].
  virtual double entail_prob(std::string_view premise, std::string_view hypothesis) const = 0;

  virtual bool concurrent() const { return true; }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// Vector length; 0 when not yet known (remote backends).
  virtual std::size_t dimension() const = 0;

  /// Out-of-vocabulary words map to the zero vector.
  virtual std::vector<double> embed(std::string_view word) const = 0;

  virtual bool concurrent() const { return true; }
};

/// Word-level lexicon (frequency or word prevalence). Keys are lowercased.
class Lexicon {
 public:
  Lexicon() = default;
  /// Throws DataError on non-finite values. Keys are lowercased; on a clash
  /// after lowercasing the later entry in map order wins.
  Lexicon(std::string name, const std::map<std::string, double>& table);

  const std::string& name() const { return name_; }
  std::size_t size() const { return table_.size(); }
  bool empty() const { return table_.empty(); }

  std::optional<double> lookup(std::string_view word) const;

 private:
  std::string name_;
  std::map<std::string, double, std::less<>> table_;
};

// ---------------------------------------------------------------------------
// Hash-based stubs. Every value is FNV-1a-64 over UTF-8 bytes reduced mod 1000
// and scaled to [0, 1], so outputs are reproducible on any platform.

/// A small list of common English words, used as the stub LM vocabulary.
const std::vector<std::string>& default_stub_vocabulary();

/// Scores each vocabulary word by hash_unit(word), independent of context.
/// word_probability hashes the masked text too:
/// max(fnv(text + "|" + word) mod 1000, 1) / 1000.
class StubMaskedLM final : public MaskedLMProvider {
 public:
  explicit StubMaskedLM(std::vector<std::string> vocabulary = default_stub_vocabulary(),
                        std::size_t max_sequence_bytes = 4096);

  LmCapabilities capabilities() const override;
  std::vector<ScoredWord> masked_topk(const MaskedText& input, int k) const override;
  double word_probability(const MaskedText& input, std::string_view word) const override;

 private:
  std::vector<std::string> vocabulary_;
  std::size_t max_sequence_bytes_;
};

/// entail_prob(p, h) = hash_unit(p + "→" + h); 1.0 for identical texts when
/// `identical_is_entailed` is set.
class StubNLI final : public NLIProvider {
 public:
  explicit StubNLI(bool identical_is_entailed = true) : identical_is_entailed_(identical_is_entailed) {}

  double entail_prob(std::string_view premise, std::string_view hypothesis) const override;

 private:
  bool identical_is_entailed_;
};

/// Component i = 2 * hash_unit(word + "#" + i) - 1.
class StubEmbedding final : public EmbeddingProvider {
 public:
  explicit StubEmbedding(std::size_t dimension = 8) : dimension_(dimension) {}

  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view word) const override;

 private:
  std::size_t dimension_;
};

/// Synthetic lexicon over `words`: value = hash_unit(name + ":" + word).
/// Words with fnv1a64(name + "?" + word) divisible by 5 are omitted.
Lexicon make_stub_lexicon(const std::string& name, const std::vector<std::string>& words);

/// In-memory embedding table, e.g. loaded from a fastText .vec file.
class TableEmbedding final : public EmbeddingProvider {
 public:
  TableEmbedding(std::size_t dimension, std::map<std::string, std::vector<double>, std::less<>> table);

  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view word) const override;

 private:
  std::size_t dimension_;
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

// ---------------------------------------------------------------------------

/// The model backends one pipeline run uses.
struct ProviderSet {
  std::shared_ptr<const MaskedLMProvider> lm;
  std::shared_ptr<const NLIProvider> nli;
  std::shared_ptr<const EmbeddingProvider> embeddings;
  std::optional<Lexicon> freq;
  std::optional<Lexicon> wp_crowd;
  std::optional<Lexicon> wp_corp;
};

/// Wraps every provider that does not declare concurrent() behind a mutex so
/// the set can be shared by worker threads.
ProviderSet serialize_non_concurrent(ProviderSet providers);

/// Stubs for the LM, NLI and embeddings plus synthetic lexicons over the stub
/// vocabulary.
ProviderSet make_stub_providers();

}  // namespace lexsimp
