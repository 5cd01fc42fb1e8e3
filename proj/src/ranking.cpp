#include "lexsimp/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lexsimp/error.hpp"
#include "lexsimp/stats.hpp"

namespace lexsimp {

std::vector<int> rank_feature(std::span<const std::optional<double>> scores, Direction direction) {
  // Present values sorted best first; rank = index of the first equal value + 1.
  std::vector<double> present;
  present.reserve(scores.size());
  for (const auto& s : scores) {
    if (s && !std::isnan(*s)) present.push_back(*s);
  }
  const bool higher = direction == Direction::higher_better;
  if (higher) {
    std::sort(present.begin(), present.end(), std::greater<>());
  } else {
    std::sort(present.begin(), present.end());
  }
  std::vector<int> ranks;
  ranks.reserve(scores.size());
  for (const auto& s : scores) {
    if (!s || std::isnan(*s)) {
      ranks.push_back(static_cast<int>(present.size()) + 1);
      continue;
    }
    const auto first = higher ? std::lower_bound(present.begin(), present.end(), *s, std::greater<>())
                              : std::lower_bound(present.begin(), present.end(), *s);
    ranks.push_back(static_cast<int>(first - present.begin()) + 1);
  }
  return ranks;
}

RankVector build_rank_vector(std::span<const ScoredCandidate> candidates, std::span<const Feature> features) {
  RankVector out;
  std::vector<std::optional<double>> column(candidates.size());
  for (Feature f : features) {
    for (std::size_t i = 0; i < candidates.size(); ++i) column[i] = candidates[i].scores.get(f);
    out[f] = rank_feature(column, direction_of(f));
  }
  return out;
}

std::vector<long long> aggregate(const RankVector& ranks, const RunConfig& config) {
  std::vector<long long> totals;
  bool sized = false;
  for (const auto& [feature, weight] : config.feature_weights) {
    if (weight == 0) continue;
    const auto it = ranks.find(feature);
    if (it == ranks.end()) {
      throw MissingFeature("run '" + std::string(run_name(config.run_id)) + "' weights feature '" +
                           std::string(feature_name(feature)) + "' but no ranks were computed for it");
    }
    if (!sized) {
      totals.assign(it->second.size(), 0);
      sized = true;
    } else if (it->second.size() != totals.size()) {
      throw MissingFeature("feature '" + std::string(feature_name(feature)) + "' ranks a different candidate set");
    }
    for (std::size_t i = 0; i < totals.size(); ++i) {
      totals[i] += static_cast<long long>(weight) * it->second[i];
    }
  }
  if (!sized && !ranks.empty()) totals.assign(ranks.begin()->second.size(), 0);
  return totals;
}

std::vector<bool> prune_by_mean_eq(std::span<const double> eq_scores) {
  std::vector<bool> keep(eq_scores.size(), true);
  if (eq_scores.empty()) return keep;
  const auto [lo, hi] = std::minmax_element(eq_scores.begin(), eq_scores.end());
  // The rounded mean can drift outside [min, max], e.g. for n equal values.
  const double mean = std::clamp(stats::mean(eq_scores), *lo, *hi);
  for (std::size_t i = 0; i < eq_scores.size(); ++i) keep[i] = !(eq_scores[i] < mean);
  keep[static_cast<std::size_t>(hi - eq_scores.begin())] = true;
  return keep;
}

std::string_view tie_break_name(TieBreak t) {
  switch (t) {
    case TieBreak::total_rank: return "total_rank";
    case TieBreak::gen_prob: return "gen_prob";
    case TieBreak::lexicographic: return "lexicographic";
  }
  return "?";
}

RankedOutput finalize(std::span<const Candidate> candidates, std::span<const long long> totals,
                      const std::vector<bool>& keep, int k_output) {
  if (totals.size() != candidates.size() || keep.size() != candidates.size()) {
    throw DataError("finalize: candidate, total and keep lists differ in length");
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (totals[a] != totals[b]) return totals[a] < totals[b];
    if (candidates[a].gen_prob != candidates[b].gen_prob) return candidates[a].gen_prob > candidates[b].gen_prob;
    return candidates[a].surface < candidates[b].surface;
  });
  if (k_output >= 0 && order.size() > static_cast<std::size_t>(k_output)) {
    order.resize(static_cast<std::size_t>(k_output));
  }
  RankedOutput out;
  for (std::size_t idx : order) {
    out.candidates.push_back(candidates[idx].surface);
    out.total_rank.push_back(totals[idx]);
  }
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const Candidate& a = candidates[order[i]];
    const Candidate& b = candidates[order[i + 1]];
    if (totals[order[i]] != totals[order[i + 1]]) {
      out.tie_break_trace.push_back(TieBreak::total_rank);
    } else if (a.gen_prob != b.gen_prob) {
      out.tie_break_trace.push_back(TieBreak::gen_prob);
    } else {
      out.tie_break_trace.push_back(TieBreak::lexicographic);
    }
  }
  return out;
}

RankedOutput rank_candidates(std::span<const ScoredCandidate> candidates, const RunConfig& config) {
  const std::vector<Feature> features = config.active_features();
  const RankVector ranks = build_rank_vector(candidates, features);
  const std::vector<long long> totals = aggregate(ranks, config);

  std::vector<Candidate> plain;
  plain.reserve(candidates.size());
  for (const ScoredCandidate& sc : candidates) plain.push_back(sc.candidate);

  std::vector<bool> keep(candidates.size(), true);
  if (config.prune_by_equivalence) {
    std::vector<double> eq;
    eq.reserve(candidates.size());
    for (const ScoredCandidate& sc : candidates) {
      if (!sc.scores.eq) throw MissingFeature("equivalence pruning needs an eq score for every candidate");
      eq.push_back(*sc.scores.eq);
    }
    keep = prune_by_mean_eq(eq);
  }
  return finalize(plain, totals, keep, config.k_output);
}

double spearman(std::span<const std::optional<double>> a, std::span<const std::optional<double>> b) {
  const std::vector<double> ra = stats::average_ranks(a, true);
  const std::vector<double> rb = stats::average_ranks(b, true);
  return stats::pearson(ra, rb).value_or(0.0);
}

FeatureSelection select_features(std::span<const TrialItem> trial, const FeatureTable& table, int top_n) {
  if (trial.empty()) throw DataError("feature selection needs at least one trial instance");
  if (top_n < 1) throw DataError("top_n must be positive");
  FeatureSelection result;

  std::vector<bool> usable(trial.size(), false);
  for (std::size_t i = 0; i < trial.size(); ++i) {
    const auto& freq = trial[i].gold.freq_table();
    bool varied = false;
    for (const auto& [token, n] : freq) {
      if (n != freq.begin()->second) varied = true;
    }
    usable[i] = varied;
    if (!varied) {
      result.warnings.push_back("instance " + std::to_string(i + 1) + " ('" + trial[i].instance.complex_word() +
                                "'): gold frequencies are all equal, skipped");
    }
  }
  if (std::none_of(usable.begin(), usable.end(), [](bool u) { return u; })) {
    throw DegenerateRanking("every trial instance has a degenerate gold ranking");
  }

  for (const auto& [name, per_instance] : table) {
    if (per_instance.size() != trial.size()) {
      throw DataError("feature '" + name + "' has scores for " + std::to_string(per_instance.size()) +
                      " instances, expected " + std::to_string(trial.size()));
    }
    std::vector<double> correlations;
    for (std::size_t i = 0; i < trial.size(); ++i) {
      if (!usable[i]) continue;
      std::vector<std::optional<double>> gold_scores;
      std::vector<std::optional<double>> feature_scores;
      for (const auto& [token, n] : trial[i].gold.freq_table()) {
        gold_scores.emplace_back(static_cast<double>(n));
        const auto it = per_instance[i].find(token);
        feature_scores.push_back(it == per_instance[i].end() ? std::nullopt : std::optional<double>(it->second));
      }
      correlations.push_back(spearman(feature_scores, gold_scores));
    }
    result.ranked.push_back({name, stats::mean(correlations), static_cast<int>(correlations.size())});
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(), [](const auto& x, const auto& y) {
    return x.mean_spearman > y.mean_spearman;
  });
  if (result.ranked.size() > static_cast<std::size_t>(top_n)) result.ranked.resize(static_cast<std::size_t>(top_n));
  return result;
}

}  // namespace lexsimp
