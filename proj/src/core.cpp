#include "lexsimp/core.hpp"

#include <algorithm>

#include "lexsimp/error.hpp"
#include "lexsimp/text.hpp"

namespace lexsimp {

namespace {

bool equal_folded(std::u32string_view a, std::u32string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i] && text::simple_lower(a[i]) != text::simple_lower(b[i])) return false;
  }
  return true;
}

}  // namespace

Instance::Instance(std::string sentence, std::string complex_word,
                   std::optional<std::size_t> word_char_offset)
    : sentence_(std::move(sentence)),
      complex_word_(std::move(complex_word)),
      word_char_offset_(word_char_offset) {
  if (sentence_.empty()) throw DataError("instance sentence is empty");
  if (sentence_.find_first_of("\t\r\n") != std::string::npos) {
    throw DataError("instance sentence contains a tab or newline");
  }
  if (!text::is_valid_utf8(sentence_) || !text::is_valid_utf8(complex_word_)) {
    throw EncodingError("instance text is not valid UTF-8");
  }
  if (complex_word_.empty()) throw DataError("complex word is empty");
  for (char32_t c : text::decode_utf8(complex_word_)) {
    if (text::is_space(c)) throw DataError("complex word '" + complex_word_ + "' contains whitespace");
  }
  if (word_char_offset_) {
    const std::u32string s = text::decode_utf8(sentence_);
    const std::u32string w = text::decode_utf8(complex_word_);
    const std::size_t at = *word_char_offset_;
    if (at + w.size() > s.size() ||
        !equal_folded(std::u32string_view(s).substr(at, w.size()), w)) {
      throw DataError("offset " + std::to_string(at) + " does not point at '" +
                      complex_word_ + "'");
    }
  }
}

GoldAnnotations derive_gold(std::vector<std::string> suggestions) {
  GoldAnnotations gold;
  gold.suggestions_ = std::move(suggestions);
  for (const std::string& s : gold.suggestions_) ++gold.freq_[text::to_lower(s)];
  int best = 0;
  for (const auto& [token, n] : gold.freq_) best = std::max(best, n);
  for (const auto& [token, n] : gold.freq_) {
    if (n == best) gold.top1_.push_back(token);
  }
  return gold;
}

std::vector<std::string> GoldAnnotations::gold_set() const {
  std::vector<std::string> out;
  out.reserve(freq_.size());
  for (const auto& [token, n] : freq_) out.push_back(token);
  return out;
}

bool GoldAnnotations::contains(std::string_view lowered) const {
  return freq_.find(lowered) != freq_.end();
}

bool GoldAnnotations::in_top1(std::string_view lowered) const {
  return std::binary_search(top1_.begin(), top1_.end(), lowered);
}

int GoldAnnotations::count(std::string_view lowered) const {
  const auto it = freq_.find(lowered);
  return it == freq_.end() ? 0 : it->second;
}

CharSpan locate_target(const Instance& instance) {
  const std::u32string s = text::decode_utf8(instance.sentence());
  const std::u32string w = text::decode_utf8(instance.complex_word());
  if (instance.word_char_offset()) {
    const std::size_t at = *instance.word_char_offset();
    return {at, at + w.size()};
  }
  for (std::size_t i = 0; i + w.size() <= s.size(); ++i) {
    if (i > 0 && text::is_alnum(s[i - 1])) continue;
    const std::size_t end = i + w.size();
    if (end < s.size() && text::is_alnum(s[end])) continue;
    if (equal_folded(std::u32string_view(s).substr(i, w.size()), w)) return {i, end};
  }
  throw TargetNotFound("'" + instance.complex_word() + "' not found in sentence: " +
                       instance.sentence());
}

ByteSpan locate_target_bytes(const Instance& instance) {
  const CharSpan span = locate_target(instance);
  return {text::byte_offset(instance.sentence(), span.begin),
          text::byte_offset(instance.sentence(), span.end)};
}

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::b: return "b";
    case Feature::l: return "l";
    case Feature::sim: return "sim";
    case Feature::freq: return "freq";
    case Feature::wp_crowd: return "wp_crowd";
    case Feature::wp_corp: return "wp_corp";
    case Feature::eq: return "eq";
  }
  return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (Feature f : kAllFeatures) {
    if (feature_name(f) == name) return f;
  }
  return std::nullopt;
}

bool higher_is_better(Feature f) { return f != Feature::l; }

std::optional<double> FeatureScores::get(Feature f) const {
  switch (f) {
    case Feature::b: return b_prob;
    case Feature::l: return l_loss;
    case Feature::sim: return sim;
    case Feature::freq: return freq;
    case Feature::wp_crowd: return wp_crowd;
    case Feature::wp_corp: return wp_corp;
    case Feature::eq: return eq;
  }
  return std::nullopt;
}

std::string_view run_name(RunId id) {
  switch (id) {
    case RunId::lsbert: return "lsbert";
    case RunId::mantis1: return "mantis1";
    case RunId::mantis2: return "mantis2";
    case RunId::mantis3: return "mantis3";
  }
  return "?";
}

std::optional<RunId> parse_run(std::string_view name) {
  for (RunId id : {RunId::lsbert, RunId::mantis1, RunId::mantis2, RunId::mantis3}) {
    if (run_name(id) == name) return id;
  }
  return std::nullopt;
}

RunConfig RunConfig::preset(RunId id) {
  RunConfig cfg;
  cfg.run_id = id;
  switch (id) {
    case RunId::lsbert:
      cfg.feature_weights = {{Feature::b, 1}, {Feature::l, 1}, {Feature::sim, 1}, {Feature::freq, 1}};
      break;
    case RunId::mantis1:
      cfg.feature_weights = {{Feature::b, 1}, {Feature::sim, 3}, {Feature::freq, 1}};
      cfg.prune_by_equivalence = true;
      break;
    case RunId::mantis2:
      cfg.feature_weights = {{Feature::wp_crowd, 1}, {Feature::eq, 1}};
      break;
    case RunId::mantis3:
      cfg.feature_weights = {{Feature::wp_corp, 1}, {Feature::eq, 1}};
      break;
  }
  return cfg;
}

std::vector<Feature> RunConfig::active_features() const {
  std::vector<Feature> out;
  for (const auto& [f, w] : feature_weights) {
    if (w != 0) out.push_back(f);
  }
  return out;
}

bool RunConfig::matches_preset() const {
  const RunConfig ref = preset(run_id);
  auto nonzero = [](const std::map<Feature, int>& m) {
    std::map<Feature, int> out;
    for (const auto& [f, w] : m) {
      if (w != 0) out.emplace(f, w);
    }
    return out;
  };
  return nonzero(feature_weights) == nonzero(ref.feature_weights) &&
         prune_by_equivalence == ref.prune_by_equivalence;
}

}  // namespace lexsimp
