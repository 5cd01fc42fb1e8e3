#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "lexsimp/error.hpp"
#include "lexsimp/eval.hpp"
#include "lexsimp/generation.hpp"
#include "lexsimp/io.hpp"
#include "lexsimp/ranking.hpp"
#include "lexsimp/scoring.hpp"
#include "lexsimp/stemmer.hpp"
#include "oracle.hpp"

using namespace lexsimp;

namespace {

// Every context word gets at least the probability the wrapped model gives it.
class DominatingLM final : public MaskedLMProvider {
 public:
  explicit DominatingLM(const MaskedLMProvider& base) : base_(base) {}
  LmCapabilities capabilities() const override { return base_.capabilities(); }
  std::vector<ScoredWord> masked_topk(const MaskedText& input, int k) const override {
    return base_.masked_topk(input, k);
  }
  double word_probability(const MaskedText& input, std::string_view word) const override {
    return std::sqrt(base_.word_probability(input, word));
  }

 private:
  const MaskedLMProvider& base_;
};

std::vector<std::string> surfaces(const std::vector<Candidate>& cands) {
  std::vector<std::string> out;
  for (const auto& c : cands) out.push_back(c.surface);
  return out;
}

std::vector<Candidate> generate_or_empty(const Instance& inst, const MaskedLMProvider& lm, int k) {
  try {
    return generate_candidates(build_masked_pair(inst), inst, lm, k);
  } catch (const EmptyCandidateSet&) {
    return {};
  }
}

}  // namespace

TEST_CASE("derive_gold ignores input order") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto words = gen::metric_case(rng).gold;
    const auto a = derive_gold(words);
    std::shuffle(words.begin(), words.end(), rng);
    const auto b = derive_gold(words);
    CHECK(a.freq_table() == b.freq_table());
    CHECK(a.top1_set() == b.top1_set());
    CHECK(a.gold_set() == b.gold_set());
  }
}

TEST_CASE("top1 is a subset of gold and shares the max count") {
  gen::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = derive_gold(gen::metric_case(rng).gold);
    int max_count = 0;
    int total = 0;
    for (const auto& [w, n] : g.freq_table()) {
      CHECK(n >= 1);
      max_count = std::max(max_count, n);
      total += n;
    }
    CHECK(total == static_cast<int>(g.suggestions().size()));
    CHECK_FALSE(g.top1_set().empty());
    for (const auto& w : g.top1_set()) {
      CHECK(g.contains(w));
      CHECK(g.count(w) == max_count);
    }
  }
}

TEST_CASE("locate_target is deterministic") {
  gen::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [sentence, target] = gen::sentence(rng);
    const Instance inst(sentence, target);
    CHECK(locate_target(inst) == locate_target(inst));
  }
}

TEST_CASE("stub masked_topk is strictly sorted without duplicates") {
  const StubMaskedLM lm;
  gen::Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [sentence, target] = gen::sentence(rng);
    const auto pair = build_masked_pair(Instance(sentence, target));
    const auto top = lm.masked_topk(pair.encoded, gen::uniform(rng, 1, 60));
    std::set<std::string> seen;
    for (std::size_t i = 0; i < top.size(); ++i) {
      CHECK(seen.insert(top[i].word).second);
      if (i > 0) {
        const bool ordered = top[i - 1].prob > top[i].prob ||
                             (top[i - 1].prob == top[i].prob && top[i - 1].word < top[i].word);
        CHECK(ordered);
      }
    }
    CHECK(top == lm.masked_topk(pair.encoded, static_cast<int>(top.size())));
  }
}

TEST_CASE("candidate sets respect the generation contract") {
  const StubMaskedLM lm;
  gen::Rng rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [sentence, target] = gen::sentence(rng);
    const Instance inst(sentence, target);
    const int k = gen::uniform(rng, 1, 30);
    const auto cands = generate_or_empty(inst, lm, k);
    CHECK(static_cast<int>(cands.size()) <= k);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      CHECK(cands[i].surface != text::to_lower(target));
      CHECK(porter_stem(cands[i].surface) != porter_stem(text::to_lower(target)));
      if (i > 0) CHECK(cands[i - 1].gen_prob >= cands[i].gen_prob);
    }
    CHECK(surfaces(cands) == surfaces(generate_or_empty(inst, lm, k)));

    const auto larger = generate_or_empty(inst, lm, k + gen::uniform(rng, 1, 20));
    REQUIRE(larger.size() >= cands.size());
    CHECK(std::equal(cands.begin(), cands.end(), larger.begin(),
                     [](const Candidate& a, const Candidate& b) { return a.surface == b.surface; }));
  }
}

TEST_CASE("equivalence algebra under the stub") {
  const StubNLI nli;
  const StubMaskedLM lm;
  gen::Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [sentence, target] = gen::sentence(rng);
    const Instance inst(sentence, target);
    for (const auto& c : generate_or_empty(inst, lm, 5)) {
      const Equivalence e = equivalence(inst, c, nli);
      const std::string sub = substitute(inst, c.surface);
      const double backward_first = nli.entail_prob(sub, inst.sentence()) * nli.entail_prob(inst.sentence(), sub);
      CHECK(e.value == backward_first);
      CHECK(e.value == equivalence_score(inst, c, nli));
      CHECK(e.value >= 0.0);
      CHECK(e.value <= std::min(e.forward, e.backward));
      CHECK(std::max(e.forward, e.backward) <= 1.0);
    }
  }
}

TEST_CASE("cosine is symmetric and scale invariant") {
  gen::Rng rng(17);
  const StubEmbedding emb;
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = emb.embed("w" + std::to_string(gen::uniform(rng, 0, 999)));
    const auto v = emb.embed("w" + std::to_string(gen::uniform(rng, 0, 999)));
    const double c = std::ldexp(1.0, gen::uniform(rng, -6, 6));
    std::vector<double> us(u);
    std::vector<double> vs(v);
    for (double& x : us) x *= c;
    for (double& x : vs) x *= c;
    CHECK(cosine(u, v) == cosine(v, u));
    CHECK(cosine(us, vs) == doctest::Approx(cosine(u, v)).epsilon(1e-12));
  }
  CHECK(score_sim("Stern", {"harsh", 0.5}, emb) == score_sim("harsh", {"stern", 0.5}, emb));
}

TEST_CASE("context loss shrinks when every context word becomes likelier") {
  const StubMaskedLM lm;
  const DominatingLM dominating(lm);
  gen::Rng rng(18);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [sentence, target] = gen::sentence(rng);
    const Instance inst(sentence, target);
    const Candidate cand{"plain", 0.5};
    const auto base = score_l(inst, cand, lm);
    const auto better = score_l(inst, cand, dominating);
    CHECK(better.loss <= base.loss);
    CHECK(better.positions == base.positions);
  }
}

TEST_CASE("rank_feature matches the counting definition") {
  gen::Rng rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    const auto scores = gen::score_vector(rng, gen::uniform(rng, 0, 8));
    CHECK(rank_feature(scores, Direction::higher_better) == oracle::naive_rank(scores, true));
    CHECK(rank_feature(scores, Direction::lower_better) == oracle::naive_rank(scores, false));
  }
}

TEST_CASE("monotone transforms leave ranks unchanged") {
  gen::Rng rng(20);
  for (int trial = 0; trial < 300; ++trial) {
    auto scores = gen::score_vector(rng, gen::uniform(rng, 1, 8));
    const auto t = gen::increasing_transform(rng);
    auto moved = scores;
    for (auto& x : moved) {
      if (x) x = t(*x);
    }
    CHECK(rank_feature(scores, Direction::higher_better) == rank_feature(moved, Direction::higher_better));
    CHECK(rank_feature(scores, Direction::lower_better) == rank_feature(moved, Direction::lower_better));
  }
}

TEST_CASE("order survives weight scaling and monotone feature transforms") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto cands = gen::candidate_set(rng);
    const RunConfig cfg = gen::run_config(rng);
    const auto base = rank_candidates(cands, cfg);

    RunConfig scaled = cfg;
    const int c = gen::uniform(rng, 2, 7);
    for (auto& [f, w] : scaled.feature_weights) w *= c;
    CHECK(rank_candidates(cands, scaled).candidates == base.candidates);

    // Pruning compares eq against its mean, which is not order-preserving
    // under a transform, so eq is only moved when it does not prune.
    std::vector<Feature> movable;
    for (Feature f : cfg.active_features()) {
      if (!(f == Feature::eq && cfg.prune_by_equivalence)) movable.push_back(f);
    }
    if (movable.empty()) continue;
    const Feature f = movable[gen::uniform(rng, 0, static_cast<int>(movable.size()) - 1)];
    gen::transform_feature(cands, f, gen::increasing_transform(rng));
    CHECK(rank_candidates(cands, cfg).candidates == base.candidates);
  }
}

TEST_CASE("finalize output is unique and repeatable") {
  gen::Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cands = gen::candidate_set(rng);
    const RunConfig cfg = gen::run_config(rng);
    const auto a = rank_candidates(cands, cfg);
    const auto b = rank_candidates(cands, cfg);
    CHECK(a.candidates == b.candidates);
    CHECK(a.total_rank == b.total_rank);
    const std::set<std::string> unique(a.candidates.begin(), a.candidates.end());
    CHECK(unique.size() == a.candidates.size());
    CHECK(static_cast<int>(a.candidates.size()) <= cfg.k_output);
    CHECK(std::is_sorted(a.total_rank.begin(), a.total_rank.end()));
  }
}

TEST_CASE("pruning keeps the maximum and matches the mean rule") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen::uniform(rng, 1, 10);
    std::vector<double> eq;
    for (int i = 0; i < n; ++i) eq.push_back(gen::uniform(rng, 0, 16) / 16.0);
    const auto keep = prune_by_mean_eq(eq);
    CHECK(keep == oracle::prune(eq));
    const auto top = std::max_element(eq.begin(), eq.end()) - eq.begin();
    CHECK(keep[static_cast<std::size_t>(top)]);
  }
}

TEST_CASE("lsbert total divided by four is the averaged rank score") {
  gen::Rng rng(24);
  const RunConfig cfg = RunConfig::preset(RunId::lsbert);
  for (int trial = 0; trial < 100; ++trial) {
    const auto cands = gen::candidate_set(rng);
    const auto ranks = build_rank_vector(cands, cfg.active_features());
    const auto totals = aggregate(ranks, cfg);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const double score = (ranks.at(Feature::b)[i] + ranks.at(Feature::l)[i] + ranks.at(Feature::sim)[i] +
                            ranks.at(Feature::freq)[i]) /
                           4.0;
      CHECK(static_cast<double>(totals[i]) / 4.0 == score);
    }
  }
}

TEST_CASE("metric identities and bounds per instance") {
  gen::Rng rng(25);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = gen::metric_case(rng);
    const auto g = derive_gold(c.gold);
    const oracle::Gold og{c.gold};
    CHECK(static_cast<double>(eval::accuracy_at_1(c.pred, g)) == eval::average_precision_at_k(c.pred, g, 1));
    CHECK(eval::accuracy_at_1(c.pred, g) == eval::potential_at_k(c.pred, g, 1));
    CHECK(static_cast<double>(eval::accuracy_at_1(c.pred, g)) == eval::precision_at_k(c.pred, g, 1));

    double prev_ap_sum = 0.0;
    int prev_pot = 0;
    int prev_top1 = 0;
    for (int k = 1; k <= 10; ++k) {
      const int pot = eval::potential_at_k(c.pred, g, k);
      const int top1 = eval::accuracy_at_k_top1(c.pred, g, k);
      const double ap = eval::average_precision_at_k(c.pred, g, k);
      CHECK(top1 <= pot);
      CHECK(ap <= pot);
      CHECK(pot >= prev_pot);
      CHECK(top1 >= prev_top1);
      // With the 1/K factor AP itself can fall as K grows; the precision sum
      // it normalizes cannot.
      CHECK(ap * k >= prev_ap_sum - 1e-12);
      prev_pot = pot;
      prev_top1 = top1;
      prev_ap_sum = ap * k;

      CHECK(pot == oracle::potential(c.pred, og, k));
      CHECK(top1 == oracle::acc_top1(c.pred, og, k));
      CHECK(ap == doctest::Approx(oracle::average_precision(c.pred, og, k)).epsilon(1e-12));
      CHECK(eval::precision_at_k(c.pred, g, k) == doctest::Approx(oracle::precision(c.pred, og, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("prediction files round trip") {
  gen::Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Instance> instances;
    std::vector<std::vector<std::string>> outputs;
    const int n = gen::uniform(rng, 1, 6);
    for (int i = 0; i < n; ++i) {
      const auto [sentence, target] = gen::sentence(rng);
      instances.emplace_back(sentence, target);
      outputs.push_back(gen::metric_case(rng).pred);
    }
    std::istringstream in(io::format_predictions(instances, outputs));
    const auto rows = io::parse_predictions(in, "mem");
    REQUIRE(rows.size() == instances.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].sentence == instances[i].sentence());
      CHECK(rows[i].word == instances[i].complex_word());
      CHECK(rows[i].candidates == outputs[i]);
    }
  }
}

TEST_CASE("CRLF and LF inputs parse the same") {
  const std::string lf = "It was compulsory.\tcompulsory\tmandatory\trequired\nA b.\tb\tc\n";
  std::string crlf;
  for (char ch : lf) crlf += ch == '\n' ? std::string("\r\n") : std::string(1, ch);
  std::istringstream a(lf);
  std::istringstream b(crlf);
  const auto da = io::parse_dataset(a, "lf", true);
  const auto db = io::parse_dataset(b, "crlf", true);
  REQUIRE(da.size() == db.size());
  for (std::size_t i = 0; i < da.size(); ++i) {
    CHECK(da.instances[i].sentence() == db.instances[i].sentence());
    CHECK(da.instances[i].complex_word() == db.instances[i].complex_word());
    CHECK(da.gold[i].suggestions() == db.gold[i].suggestions());
  }
  std::istringstream pc("S x.\tx\ty\tz\r\n");
  const auto rows = io::parse_predictions(pc, "crlf");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].candidates == std::vector<std::string>{"y", "z"});
  CHECK(io::format_predictions({Instance("S x.", "x")}, {{"y", "z"}}).find('\r') == std::string::npos);
}

TEST_CASE("identical config text gives identical settings") {
  const std::string body = "run=mantis2\nk_generate=20\nweights.eq=2\ncontext_window_m=3\njobs=2\n";
  std::istringstream a(body);
  std::istringstream b(body);
  const auto sa = io::parse_config(a, "a.cfg");
  const auto sb = io::parse_config(b, "b.cfg");
  CHECK(sa.run.run_id == sb.run.run_id);
  CHECK(sa.run.feature_weights == sb.run.feature_weights);
  CHECK(sa.run.prune_by_equivalence == sb.run.prune_by_equivalence);
  CHECK(sa.run.k_generate == sb.run.k_generate);
  CHECK(sa.run.k_output == sb.run.k_output);
  CHECK(sa.run.context_window_m == sb.run.context_window_m);
  CHECK(sa.jobs == sb.jobs);
  CHECK(sa.providers == sb.providers);
}
