#pragma once

// Decile selection, portfolio weighting and transaction costs.

#include <cstddef>
#include <span>
#include <vector>

#include "seqrank/ranker.hpp"

namespace seqrank {

enum class Mode { long_only, long_short };

struct DecileSelection {
  std::vector<std::size_t> long_set;   // best first
  std::vector<std::size_t> short_set;  // worst last
};

// Signed weights, long positive and short negative.
struct PortfolioState {
  std::vector<double> weights;
};

// k = max(1, floor(d * fraction)). Orders scores descending with ties by
// ascending index; longs are the first k of that order and shorts the last k
// (none in long-only mode), minus any overlap with the longs.
DecileSelection select_decile(std::span<const double> scores, double fraction, Mode mode);

std::size_t decile_size(std::size_t d, double fraction);

// +1/k on longs and -1/k on shorts, each leg normalised by its own size.
PortfolioState cw_weights(std::size_t d, const DecileSelection& selection);

// Longs weighted by p, shorts by 1 - p, each leg normalised to 1.
PortfolioState nbar_weights(const NaiveBayesRanker& ranker, const DecileSelection& selection);

// sum_j rate_j * |next_j - prev_j|. Throws on a negative rate or length
// mismatch.
double transaction_cost(const PortfolioState& prev, const PortfolioState& next,
                        std::span<const double> half_spread_rates);

}  // namespace seqrank
