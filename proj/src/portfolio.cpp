#include "seqrank/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seqrank {

std::size_t decile_size(std::size_t d, double fraction) {
  if (!(fraction > 0.0 && fraction <= 0.5)) throw std::invalid_argument("decile fraction must be in (0, 0.5]");
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(d) * fraction));
  return std::max<std::size_t>(1, k);
}

DecileSelection select_decile(std::span<const double> scores, double fraction, Mode mode) {
  const std::size_t d = scores.size();
  if (d < 2) throw std::invalid_argument("select_decile needs at least 2 scores");
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("select_decile scores must be finite");
  const std::size_t k = decile_size(d, fraction);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  DecileSelection out;
  out.long_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  if (mode == Mode::long_short) {
    for (std::size_t i = d - k; i < d; ++i)
      if (std::find(out.long_set.begin(), out.long_set.end(), order[i]) == out.long_set.end())
        out.short_set.push_back(order[i]);
  }
  return out;
}

PortfolioState cw_weights(std::size_t d, const DecileSelection& selection) {
  PortfolioState out{std::vector<double>(d, 0.0)};
  if (!selection.long_set.empty()) {
    const double w = 1.0 / static_cast<double>(selection.long_set.size());
    for (auto j : selection.long_set) out.weights.at(j) = w;
  }
  if (!selection.short_set.empty()) {
    const double w = 1.0 / static_cast<double>(selection.short_set.size());
    for (auto j : selection.short_set) out.weights.at(j) = -w;
  }
  return out;
}

PortfolioState nbar_weights(const NaiveBayesRanker& ranker, const DecileSelection& selection) {
  PortfolioState out{std::vector<double>(ranker.size(), 0.0)};
  if (!selection.long_set.empty()) {
    const auto w = ranker.long_weights(selection.long_set);
    for (std::size_t i = 0; i < w.size(); ++i) out.weights[selection.long_set[i]] = w[i];
  }
  if (!selection.short_set.empty()) {
    const auto w = ranker.short_weights(selection.short_set);
    for (std::size_t i = 0; i < w.size(); ++i) out.weights[selection.short_set[i]] = -w[i];
  }
  return out;
}

double transaction_cost(const PortfolioState& prev, const PortfolioState& next,
                        std::span<const double> half_spread_rates) {
  const auto d = half_spread_rates.size();
  if (prev.weights.size() != d || next.weights.size() != d)
    throw std::invalid_argument("transaction_cost: weight and spread vectors must have equal length");
  double cost = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(half_spread_rates[j] >= 0.0)) throw std::invalid_argument("transaction_cost: negative spread rate");
    cost += half_spread_rates[j] * std::abs(next.weights[j] - prev.weights[j]);
  }
  return cost;
}

}  // namespace seqrank
