#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexsimp/core.hpp"

namespace lexsimp::eval {

// Per-instance scores. Predictions are matched lowercased against the gold
// set; only the first min(k, |pred|) predictions count. k must be >= 1.

/// Throws DataError if the list holds a duplicate (case-insensitively).
void check_predictions(std::span<const std::string> pred);

/// 1 if any of the first k predictions is a gold substitute.
int potential_at_k(std::span<const std::string> pred, const GoldAnnotations& gold, int k);

/// 1 if any of the first k predictions is among the most frequent gold substitutes.
int accuracy_at_k_top1(std::span<const std::string> pred, const GoldAnnotations& gold, int k);

/// AP@K = (1/K) * sum_i rel_i * precision@i over the first min(K, |pred|) positions.
double average_precision_at_k(std::span<const std::string> pred, const GoldAnnotations& gold, int k);

/// Fraction of the first k slots holding a gold substitute (denominator k).
double precision_at_k(std::span<const std::string> pred, const GoldAnnotations& gold, int k);

/// 1 if the first prediction is a gold substitute.
int accuracy_at_1(std::span<const std::string> pred, const GoldAnnotations& gold);

struct MetricReport {
  std::vector<std::pair<std::string, double>> values;
  std::size_t instances = 0;
  std::vector<int> ks;
  std::vector<int> top1_ks;

  std::optional<double> get(std::string_view metric) const;
};

inline const std::vector<int> kDefaultKs{1, 3, 5, 10};
inline const std::vector<int> kDefaultTop1Ks{1, 2, 3};

/// Dataset means. Emits ACC@1 when 1 is in `ks`, then Accuracy@K@top1 for
/// `top1_ks`, then MAP@K and Potential@K for `ks`.
MetricReport evaluate(std::span<const GoldAnnotations> gold, std::span<const std::vector<std::string>> predictions,
                      std::span<const int> ks = kDefaultKs, std::span<const int> top1_ks = kDefaultTop1Ks);

/// `metric<TAB>value` lines.
std::string format_tsv(const MetricReport& report);

/// Aligned two-column table for humans.
std::string format_table(const MetricReport& report);

struct CorrelationReport {
  std::vector<std::string> metrics;
  std::vector<std::vector<double>> matrix;  // Pearson r
  double mean = 0.0;                        // over the upper triangle
  double sd = 0.0;                          // sample sd over the upper triangle
};

/// Pairwise Pearson correlations of metric columns over submission rows.
/// Needs >= 3 rows and >= 2 columns; throws DegenerateColumn when a column
/// has zero variance.
CorrelationReport metric_correlation_report(const std::vector<std::string>& metrics,
                                            const std::vector<std::vector<double>>& rows);

std::string format_correlation(const CorrelationReport& report);

}  // namespace lexsimp::eval
