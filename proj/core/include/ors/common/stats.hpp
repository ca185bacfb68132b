#pragma once

#include <span>
#include <vector>

namespace ors {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean (0 for fewer than two samples)
};

MeanSe mean_and_se(std::span<const double> xs);

/// Ranks starting at 1; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> xs);

/// Pearson correlation; returns 0 when either side has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation (Pearson on average ranks).
double spearman(std::span<const double> x, std::span<const double> y);

/// 0.5 * L1 distance between two probability vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace ors
