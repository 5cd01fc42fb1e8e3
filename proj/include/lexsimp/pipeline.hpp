#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lexsimp/core.hpp"
#include "lexsimp/providers.hpp"
#include "lexsimp/ranking.hpp"
#include "lexsimp/scoring.hpp"

namespace lexsimp {

/// Features a run must score: the weighted ones, plus eq when pruning.
std::vector<Feature> required_features(const RunConfig& config);

struct InstanceResult {
  RankedOutput output;
  std::vector<ScoredCandidate> scored;
  std::optional<std::string> warning;  // set when no candidate survived generation
};

/// Generation, scoring and ranking for one run configuration.
class Simplifier {
 public:
  /// Providers that are not concurrent are wrapped so simplify_all may share
  /// them across threads.
  Simplifier(ProviderSet providers, RunConfig config);

  const RunConfig& config() const { return config_; }

  /// An instance whose candidate set ends up empty yields an empty output
  /// and a warning. Other errors propagate.
  InstanceResult simplify(const Instance& instance) const;

  using Progress = std::function<void(std::size_t index, const Instance&, const InstanceResult&)>;

  /// Runs up to `jobs` instances at once. Results keep input order. The
  /// first error stops outstanding work and is rethrown.
  std::vector<InstanceResult> simplify_all(const std::vector<Instance>& instances, int jobs = 1,
                                           const Progress& progress = {}) const;

 private:
  ProviderSet providers_;
  RunConfig config_;
  std::vector<Feature> features_;
};

}  // namespace lexsimp
