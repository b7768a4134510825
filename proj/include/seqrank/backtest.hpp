#pragma once

// Daily close-to-close backtest of the curds-whey and naive Bayes ranker
// strategies against an equal-weight buy-and-hold benchmark.
//
// On each rebalance close t (from the first date with a return to the
// second-to-last date):
//   1. step the curds-whey model with x_t = [1, ret_t], y_t = ret_t and take
//      its forecast y_tilde_t of ret_{t+1};
//   2. score assets (forecasts, or ranker posteriors for nbar);
//   3. select deciles and weight them;
//   4. pay half-spread costs on |w_t - w_{t-1}| at date-t quotes;
//   5. accrue gross = sum_j w_t[j] * ret_{t+1}[j].
// The first rebalance starts from a flat book.

#include <optional>
#include <string>
#include <vector>

#include "seqrank/execution.hpp"
#include "seqrank/metrics.hpp"
#include "seqrank/portfolio.hpp"
#include "seqrank/regression.hpp"
#include "seqrank/timeseries.hpp"

namespace seqrank {

enum class StrategyKind { curds_whey, nbar };
enum class NbarInput { forecasts, realised };
enum class NbarMembership { by_p, by_forecast };
enum class CostModel { half_spread, zero };

std::string to_string(Mode v);
std::string to_string(StrategyKind v);
std::string to_string(NbarInput v);
std::string to_string(NbarMembership v);
std::string to_string(CostModel v);
Mode parse_mode(std::string_view text);
StrategyKind parse_strategy(std::string_view text);
NbarInput parse_nbar_input(std::string_view text);
NbarMembership parse_nbar_membership(std::string_view text);
CostModel parse_cost_model(std::string_view text);

struct BacktestConfig {
  Mode mode = Mode::long_only;
  StrategyKind strategy = StrategyKind::nbar;
  double decile_fraction = 0.1;
  double tau = 0.999;
  double lambda = 1.0;
  Stabilisation stabilisation = Stabilisation::rescale;
  NbarInput nbar_input = NbarInput::forecasts;
  NbarMembership nbar_membership = NbarMembership::by_p;
  CostModel cost_model = CostModel::half_spread;
  Execution execution = Execution::parallel;

  void validate() const;
};

struct DailyRecord {
  Date date;  // rebalance close; pnl accrues to the next date
  double gross = 0.0;
  double cost = 0.0;
  double net = 0.0;  // gross - cost
  double turnover = 0.0;
  double benchmark = 0.0;  // equal-weight gross, zero cost
  std::size_t n_long = 0;
  std::size_t n_short = 0;
};

struct SectorTally {
  std::string sector;
  std::size_t long_count = 0;
  std::size_t short_count = 0;
  double long_share = 0.0;   // long_count / all long selections
  double short_share = 0.0;
};

struct BacktestReport {
  BacktestConfig config;
  std::vector<std::string> assets;
  std::vector<DailyRecord> records;
  MetricsBlock strategy;
  MetricsBlock benchmark;
  std::vector<SectorTally> sectors;  // empty without sector labels
  std::size_t regression_resets = 0;
};

BacktestReport run_backtest(const QuotePanel& panel, const BacktestConfig& config = {});

}  // namespace seqrank
