#pragma once

#include <optional>
#include <span>
#include <vector>

namespace lexsimp::stats {

double mean(std::span<const double> x);

/// Sample standard deviation (n - 1 denominator). 0 for fewer than two values.
double sample_sd(std::span<const double> x);

/// Pearson correlation; nullopt when either input has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Fractional (average) ranks, 1 = best. Absent values share the average of
/// the worst positions.
std::vector<double> average_ranks(std::span<const std::optional<double>> values, bool higher_is_better);

}  // namespace lexsimp::stats
