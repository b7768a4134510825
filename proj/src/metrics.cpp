#include "seqrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "seqrank/distributions.hpp"

namespace seqrank {

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

MetricsBlock compute_metrics(std::span<const double> daily) {
  if (daily.size() < 2) throw std::invalid_argument("compute_metrics needs at least 2 observations");
  MetricsBlock m;
  m.days = daily.size();
  const double n = static_cast<double>(m.days);

  double log_growth = 0.0, peak = 0.0, cum = 0.0;
  bool wiped_out = false;
  std::size_t wins = 0;
  for (double r : daily) {
    if (!std::isfinite(r)) throw std::invalid_argument("compute_metrics input must be finite");
    m.sum += r;
    if (r <= -1.0) wiped_out = true;
    else log_growth += std::log1p(r);
    cum += r;
    peak = std::max(peak, cum);
    m.max_drawdown = std::max(m.max_drawdown, peak - cum);
    if (r > 0.0) ++wins;
  }
  m.mean = m.sum / n;
  double ss = 0.0;
  for (double r : daily) ss += (r - m.mean) * (r - m.mean);
  m.std = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(daily.begin(), daily.end());
  std::sort(sorted.begin(), sorted.end());
  m.min = sorted.front();
  m.max = sorted.back();
  m.q25 = sorted_quantile(sorted, 0.25);
  m.median = sorted_quantile(sorted, 0.5);
  m.q75 = sorted_quantile(sorted, 0.75);

  m.cagr = wiped_out ? -1.0 : std::expm1(log_growth * kTradingDaysPerYear / n);
  // A numerically constant series has a roundoff-sized std; treat it as zero.
  if (m.std > 1e-14 * std::max(1.0, std::abs(m.mean))) {
    m.sharpe = m.mean / m.std * std::sqrt(kTradingDaysPerYear);
    m.prob_positive = dist::normal_cdf(*m.sharpe);
  }
  if (m.max_drawdown > 0.0) m.return_over_maxdd = m.sum / m.max_drawdown;
  m.win_ratio = static_cast<double>(wins) / n;
  m.loss_ratio = 1.0 - m.win_ratio;
  return m;
}

}  // namespace seqrank
