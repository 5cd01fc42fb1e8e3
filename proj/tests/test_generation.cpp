#include <doctest.h>

#include <string>
#include <vector>

#include "lexsimp/error.hpp"
#include "lexsimp/generation.hpp"

using namespace lexsimp;

namespace {

/// Returns a fixed raw list and records the last request.
class ScriptedLM final : public MaskedLMProvider {
 public:
  explicit ScriptedLM(std::vector<ScoredWord> words) : words_(std::move(words)) {}

  LmCapabilities capabilities() const override { return {"scripted", 1 << 20}; }
  std::vector<ScoredWord> masked_topk(const MaskedText& input, int k) const override {
    last_input = input;
    last_k = k;
    std::vector<ScoredWord> out = words_;
    if (out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
    return out;
  }
  double word_probability(const MaskedText&, std::string_view) const override { return 0.5; }

  mutable MaskedText last_input;
  mutable int last_k = 0;

 private:
  std::vector<ScoredWord> words_;
};

std::vector<std::string> surfaces(const std::vector<Candidate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.surface);
  return out;
}

}  // namespace

TEST_CASE("masked pair layout") {
  const Instance inst("we saw huge dogs", "huge");
  const MaskedPair pair = build_masked_pair(inst);
  CHECK(pair.original == "we saw huge dogs");
  CHECK(pair.masked == "we saw <mask> dogs");
  CHECK(pair.encoded.text == "<s>we saw huge dogs</s></s>we saw <mask> dogs</s>");
  CHECK(pair.encoded.mask_offset == pair.encoded.text.find("<mask>"));
  CHECK(pair.target == ByteSpan{7, 11});
  CHECK_NOTHROW(check_single_mask(pair.encoded));
}

TEST_CASE("masked pair with multibyte text") {
  const Instance inst("Un caf\xc3\xa9 tr\xc3\xa8s fort.", "tr\xc3\xa8s");
  const MaskedPair pair = build_masked_pair(inst);
  CHECK(pair.masked == "Un caf\xc3\xa9 <mask> fort.");
  CHECK(pair.encoded.text.compare(pair.encoded.mask_offset, 6, "<mask>") == 0);
}

TEST_CASE("generation over-queries and filters") {
  const ScriptedLM lm({{"Huge", 0.9},
                       {"huges", 0.8},
                       {"hugely", 0.75},
                       {"big", 0.7},
                       {"Big", 0.65},
                       {"2", 0.6},
                       {"large", 0.5},
                       {"##x", 0.45},
                       {"vast", 0.4},
                       {"enormous", 0.3}});
  const Instance inst("we saw huge dogs", "huge");
  const MaskedPair pair = build_masked_pair(inst);

  const auto cands = generate_candidates(pair, inst, lm, 3);
  CHECK(lm.last_k == 3 * kOverQueryFactor);
  CHECK(lm.last_input.text == pair.encoded.text);
  CHECK(surfaces(cands) == std::vector<std::string>{"big", "large", "vast"});
  CHECK(cands[0].gen_prob == 0.7);

  const auto all = generate_candidates(pair, inst, lm, 30);
  CHECK(surfaces(all) == std::vector<std::string>{"big", "large", "vast", "enormous"});
}

TEST_CASE("inflections of the target are excluded") {
  const ScriptedLM lm({{"running", 0.9}, {"runs", 0.8}, {"sprint", 0.7}, {"jog", 0.6}});
  const Instance inst("I run every day", "run");
  CHECK(surfaces(generate_candidates(build_masked_pair(inst), inst, lm, 10)) ==
        std::vector<std::string>{"sprint", "jog"});
}

TEST_CASE("generation with nothing left") {
  const ScriptedLM lm({{"huge", 0.9}, {"huges", 0.8}, {",", 0.7}});
  const Instance inst("we saw huge dogs", "huge");
  CHECK_THROWS_AS(generate_candidates(build_masked_pair(inst), inst, lm, 5), EmptyCandidateSet);
  CHECK_THROWS_AS(generate_candidates(build_masked_pair(inst), inst, lm, 0), DataError);
}

TEST_CASE("stub generation is deterministic and within bounds") {
  const StubMaskedLM lm;
  const Instance inst("The committee reached a unanimous verdict.", "unanimous");
  const MaskedPair pair = build_masked_pair(inst);
  const auto a = generate_candidates(pair, inst, lm, 30);
  const auto b = generate_candidates(pair, inst, lm, 30);
  CHECK(surfaces(a) == surfaces(b));
  CHECK(a.size() == 30);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].gen_prob >= a[i].gen_prob);
}

TEST_CASE("missing target") {
  const Instance inst("we saw huge dogs", "tiny");
  CHECK_THROWS_AS(build_masked_pair(inst), TargetNotFound);
}

TEST_CASE("masked sentence examples") {
  CHECK(build_masked_pair(Instance("it is compulsory for banks", "compulsory")).masked == "it is <mask> for banks");
  CHECK(build_masked_pair(Instance("Compulsory rules apply", "compulsory")).masked == "<mask> rules apply");
  CHECK(build_masked_pair(Instance("big dogs and big cats", "big")).masked == "<mask> dogs and big cats");
}

TEST_CASE("case-insensitive duplicates collapse") {
  const ScriptedLM lm({{"Big", 0.6}, {"big", 0.5}});
  const Instance inst("we saw huge dogs", "huge");
  const auto c = generate_candidates(build_masked_pair(inst), inst, lm, 10);
  REQUIRE(c.size() == 1);
  CHECK(c[0].surface == "big");
  CHECK(c[0].gen_prob == 0.6);
}
