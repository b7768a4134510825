#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace seqrank {

inline constexpr double kTradingDaysPerYear = 252.0;

// Summary statistics of a daily return series. Ratios that divide by a zero
// stdev or drawdown are left empty rather than infinite.
struct MetricsBlock {
  std::size_t days = 0;
  double mean = 0.0;
  double std = 0.0;  // ddof = 1
  double min = 0.0;
  double q25 = 0.0;  // quartiles by linear interpolation
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
  double sum = 0.0;
  double cagr = 0.0;  // prod(1 + r)^(252 / n) - 1
  std::optional<double> sharpe;        // mean / std * sqrt(252)
  std::optional<double> prob_positive; // Phi(sharpe)
  double max_drawdown = 0.0;           // on the cumulative sum
  std::optional<double> return_over_maxdd;
  double win_ratio = 0.0;   // fraction of days with r > 0
  double loss_ratio = 0.0;  // 1 - win_ratio
};

// Requires at least 2 finite observations.
MetricsBlock compute_metrics(std::span<const double> daily);

// Linear-interpolation quantile of a sorted sample, q in [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace seqrank
