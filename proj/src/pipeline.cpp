#include "lexsimp/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "lexsimp/error.hpp"
#include "lexsimp/generation.hpp"

namespace lexsimp {

std::vector<Feature> required_features(const RunConfig& config) {
  std::vector<Feature> features = config.active_features();
  if (config.prune_by_equivalence && std::find(features.begin(), features.end(), Feature::eq) == features.end()) {
    features.push_back(Feature::eq);
  }
  return features;
}

Simplifier::Simplifier(ProviderSet providers, RunConfig config)
    : providers_(serialize_non_concurrent(std::move(providers))),
      config_(std::move(config)),
      features_(required_features(config_)) {
  if (!providers_.lm) throw MissingFeature("a masked language model is required for generation");
}

InstanceResult Simplifier::simplify(const Instance& instance) const {
  InstanceResult result;
  const MaskedPair pair = build_masked_pair(instance);
  std::vector<Candidate> candidates;
  try {
    candidates = generate_candidates(pair, instance, *providers_.lm, config_.k_generate);
  } catch (const EmptyCandidateSet& e) {
    result.warning = e.what();
    return result;
  }
  result.scored = score_candidates(instance, candidates, providers_, features_, config_.context_window_m);
  result.output = rank_candidates(result.scored, config_);
  return result;
}

std::vector<InstanceResult> Simplifier::simplify_all(const std::vector<Instance>& instances, int jobs,
                                                     const Progress& progress) const {
  std::vector<InstanceResult> results(instances.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      try {
        results[i] = simplify(instances[i]);
        if (progress) {
          std::lock_guard lock(mu);
          progress(i, instances[i], results[i]);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                                                      std::max<std::size_t>(instances.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace lexsimp
