#pragma once

#include <array>
#include <functional>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexsimp {

/// A sentence with the complex word to simplify.
class Instance {
 public:
  /// Throws DataError when the invariants do not hold: non-empty sentence
  /// without tabs or newlines, non-empty whitespace-free word, and an offset
  /// (in code points) that points at the word case-insensitively.
  Instance(std::string sentence, std::string complex_word,
           std::optional<std::size_t> word_char_offset = std::nullopt);

  const std::string& sentence() const { return sentence_; }
  const std::string& complex_word() const { return complex_word_; }
  std::optional<std::size_t> word_char_offset() const { return word_char_offset_; }

 private:
  std::string sentence_;
  std::string complex_word_;
  std::optional<std::size_t> word_char_offset_;
};

/// Half-open range of code point indices in a sentence.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

/// Half-open byte range, used when editing UTF-8 text.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

/// Gold substitutions as a multiset, with the derived frequency views.
class GoldAnnotations {
 public:
  GoldAnnotations() = default;

  const std::vector<std::string>& suggestions() const { return suggestions_; }
  /// Lowercased token -> count. Keys form the gold set.
  const std::map<std::string, int, std::less<>>& freq_table() const { return freq_; }
  std::vector<std::string> gold_set() const;
  /// Tokens whose count equals the maximum, sorted.
  const std::vector<std::string>& top1_set() const { return top1_; }

  bool contains(std::string_view lowered) const;
  bool in_top1(std::string_view lowered) const;
  int count(std::string_view lowered) const;
  bool empty() const { return suggestions_.empty(); }

 private:
  friend GoldAnnotations derive_gold(std::vector<std::string> suggestions);

  std::vector<std::string> suggestions_;
  std::map<std::string, int, std::less<>> freq_;
  std::vector<std::string> top1_;
};

/// Builds the frequency table and top-1 set from the raw suggestion multiset.
/// Counting is case-insensitive; suggestions are kept verbatim.
GoldAnnotations derive_gold(std::vector<std::string> suggestions);

/// First case-insensitive whole-token occurrence of the complex word, or the
/// span at the given offset. Throws TargetNotFound.
CharSpan locate_target(const Instance& instance);

/// locate_target, converted to bytes of instance.sentence().
ByteSpan locate_target_bytes(const Instance& instance);

/// A generated substitution candidate.
struct Candidate {
  std::string surface;  // lowercased
  double gen_prob = 0.0;
};

enum class Feature { b, l, sim, freq, wp_crowd, wp_corp, eq };

inline constexpr std::array<Feature, 7> kAllFeatures{
    Feature::b,        Feature::l,       Feature::sim, Feature::freq,
    Feature::wp_crowd, Feature::wp_corp, Feature::eq};

std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

/// Whether a larger raw value is better for the feature. Only the context
/// loss is lower-is-better.
bool higher_is_better(Feature f);

struct FeatureScores {
  double b_prob = 0.0;
  double l_loss = 0.0;
  bool l_degenerate = false;  // no context word was available
  double sim = 0.0;
  std::optional<double> freq;
  std::optional<double> wp_crowd;
  std::optional<double> wp_corp;
  std::optional<double> eq;

  /// Raw value of a feature, absent when the feature has no value.
  std::optional<double> get(Feature f) const;
};

enum class RunId { lsbert, mantis1, mantis2, mantis3 };

std::string_view run_name(RunId id);
std::optional<RunId> parse_run(std::string_view name);

struct RunConfig {
  RunId run_id = RunId::lsbert;
  std::map<Feature, int> feature_weights;
  bool prune_by_equivalence = false;
  int k_generate = 30;
  int k_output = 10;
  int context_window_m = 5;

  /// The configuration of a named run with its published weights.
  static RunConfig preset(RunId id);

  /// Features with a nonzero weight, in enum order.
  std::vector<Feature> active_features() const;

  /// True when weights and pruning equal those of preset(run_id).
  bool matches_preset() const;
};

}  // namespace lexsimp
