#pragma once
// Local outlier factor on one-dimensional data.
//
// Standard LOF definitions: k-distance, the tie-inclusive
// k-neighborhood, reachability distance, local reachability density (lrd) and
// LOF as the mean lrd ratio. Zero reachability sums give lrd = +inf; the ratio
// of two infinite densities is 1, so clusters of identical values score 1.0.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lforge {

struct LofSettings {
    bool enabled = false;
    std::size_t k = 20;
    double threshold = 1.5;
};

struct LofResult {
    std::vector<double> scores;          // parallel to the input; empty when skipped
    std::vector<std::size_t> retained;   // input indices, ascending
    std::vector<std::size_t> outliers;   // input indices, ascending
    bool skipped = false;
    std::string warning;
};

/// Raw LOF scores; requires values.size() > k >= 1.
std::vector<double> lof_raw_scores(std::span<const double> values, std::size_t k);

/// Scores and splits values at `threshold` (score > threshold is an outlier).
/// With |values| <= k the computation is skipped and everything is retained.
LofResult lof_scores(std::span<const double> values, std::size_t k, double threshold = 1.5);

}  // namespace lforge
