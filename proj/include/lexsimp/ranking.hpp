#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexsimp/core.hpp"
#include "lexsimp/scoring.hpp"

namespace lexsimp {

enum class Direction { higher_better, lower_better };

inline Direction direction_of(Feature f) {
  return higher_is_better(f) ? Direction::higher_better : Direction::lower_better;
}

/// Competition rank of each score: 1 + the number of candidates with a
/// strictly better score, so ties share a rank. Absent (or NaN) scores rank
/// after every present score and share rank |present| + 1.
std::vector<int> rank_feature(std::span<const std::optional<double>> scores, Direction direction);

/// Per-feature ranks, each vector aligned with the candidate list.
using RankVector = std::map<Feature, std::vector<int>>;

RankVector build_rank_vector(std::span<const ScoredCandidate> candidates, std::span<const Feature> features);

/// Weighted rank sum per candidate over the features the config weights.
/// Lower is better. Throws MissingFeature when a weighted feature has no ranks.
std::vector<long long> aggregate(const RankVector& ranks, const RunConfig& config);

/// Keep-mask after removing every candidate whose equivalence score is
/// strictly below the mean over all candidates. The highest-scoring
/// candidate is always kept.
std::vector<bool> prune_by_mean_eq(std::span<const double> eq_scores);

/// Which key of the sort separated two adjacent entries of the final list.
enum class TieBreak { total_rank, gen_prob, lexicographic };

std::string_view tie_break_name(TieBreak t);

struct RankedOutput {
  std::vector<std::string> candidates;
  std::vector<long long> total_rank;
  /// tie_break_trace[i] resolved candidates[i] vs candidates[i + 1].
  std::vector<TieBreak> tie_break_trace;
};

/// Orders candidates by (total rank asc, gen_prob desc, surface asc), drops
/// those not in `keep` and truncates to k_output.
RankedOutput finalize(std::span<const Candidate> candidates, std::span<const long long> totals,
                      const std::vector<bool>& keep, int k_output);

/// Full ranking stage for one instance: ranks, aggregation, optional
/// equivalence pruning and the final ordering.
RankedOutput rank_candidates(std::span<const ScoredCandidate> candidates, const RunConfig& config);

// ---------------------------------------------------------------------------
// Feature selection by rank correlation with the gold frequency ranking.

struct TrialItem {
  Instance instance;
  GoldAnnotations gold;
};

/// Feature name -> one lowercased-word -> score table per trial instance.
using FeatureTable = std::map<std::string, std::vector<std::map<std::string, double>>>;

struct FeatureCorrelation {
  std::string feature;
  double mean_spearman = 0.0;
  int instances = 0;
};

struct FeatureSelection {
  std::vector<FeatureCorrelation> ranked;  // truncated to top_n
  std::vector<std::string> warnings;
};

/// Spearman correlation (average ranks) between two score vectors over the
/// same items, both higher-is-better; absent scores rank last. 0 when either
/// side is constant.
double spearman(std::span<const std::optional<double>> a, std::span<const std::optional<double>> b);

/// Correlates each feature's ranking of the distinct gold substitutes with
/// their gold frequency ranking, averages over instances and returns the
/// top_n features by mean correlation (ties by name). Instances whose gold
/// frequencies are all equal are skipped with a warning; DegenerateRanking
/// is thrown when every instance is skipped.
FeatureSelection select_features(std::span<const TrialItem> trial, const FeatureTable& table, int top_n);

}  // namespace lexsimp
