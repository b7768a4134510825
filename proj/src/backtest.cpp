#include "seqrank/backtest.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "seqrank/ranker.hpp"
#include "seqrank/regression.hpp"

namespace seqrank {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::pair<const char*, E> (&table)[N], const char* what) {
  for (const auto& [name, value] : table)
    if (text == name) return value;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

template <class E, std::size_t N>
std::string enum_name(E v, const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [name, value] : table)
    if (v == value) return name;
  return "?";
}

constexpr std::pair<const char*, Mode> kModes[] = {{"long-only", Mode::long_only}, {"long-short", Mode::long_short}};
constexpr std::pair<const char*, StrategyKind> kStrategies[] = {{"curds-whey", StrategyKind::curds_whey},
                                                               {"nbar", StrategyKind::nbar}};
constexpr std::pair<const char*, NbarInput> kInputs[] = {{"forecasts", NbarInput::forecasts},
                                                        {"realised", NbarInput::realised}};
constexpr std::pair<const char*, NbarMembership> kMemberships[] = {{"by-p", NbarMembership::by_p},
                                                                  {"by-forecast", NbarMembership::by_forecast}};
constexpr std::pair<const char*, CostModel> kCosts[] = {{"half-spread", CostModel::half_spread},
                                                       {"zero", CostModel::zero}};

}  // namespace

std::string to_string(Mode v) { return enum_name(v, kModes); }
std::string to_string(StrategyKind v) { return enum_name(v, kStrategies); }
std::string to_string(NbarInput v) { return enum_name(v, kInputs); }
std::string to_string(NbarMembership v) { return enum_name(v, kMemberships); }
std::string to_string(CostModel v) { return enum_name(v, kCosts); }
Mode parse_mode(std::string_view t) { return parse_enum(t, kModes, "mode"); }
StrategyKind parse_strategy(std::string_view t) { return parse_enum(t, kStrategies, "strategy"); }
NbarInput parse_nbar_input(std::string_view t) { return parse_enum(t, kInputs, "nbar input"); }
NbarMembership parse_nbar_membership(std::string_view t) { return parse_enum(t, kMemberships, "nbar membership"); }
CostModel parse_cost_model(std::string_view t) { return parse_enum(t, kCosts, "cost model"); }

void BacktestConfig::validate() const {
  if (!(decile_fraction > 0.0 && decile_fraction <= 0.5))
    throw std::invalid_argument("decile fraction must be in (0, 0.5]");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must satisfy 0 < tau <= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
}

BacktestReport run_backtest(const QuotePanel& panel, const BacktestConfig& config) {
  config.validate();
  const auto n = panel.n_dates();
  // Two rebalances are the minimum for a metrics block.
  if (n < 4) throw std::invalid_argument("run_backtest needs at least 4 dates");
  const auto d = panel.n_assets();
  const auto& returns = panel.returns();
  const auto& spreads = panel.half_spreads();

  CurdsWhey model(d, config.lambda, config.tau, config.stabilisation);
  NaiveBayesRanker ranker(d, config.tau);
  PortfolioState held{std::vector<double>(d, 0.0)};
  std::vector<double> rates(d, 0.0);

  std::map<std::string, SectorTally> tallies;
  std::size_t long_total = 0, short_total = 0;

  BacktestReport report;
  report.config = config;
  report.assets = panel.assets();
  report.records.reserve(n - 2);

  Eigen::VectorXd x(static_cast<Eigen::Index>(d + 1));
  Eigen::VectorXd y(static_cast<Eigen::Index>(d));
  x[0] = 1.0;

  for (std::size_t t = 1; t + 1 < n; ++t) {
    for (std::size_t j = 0; j < d; ++j) {
      y[static_cast<Eigen::Index>(j)] = returns(t - 1, j);
      x[static_cast<Eigen::Index>(j + 1)] = returns(t - 1, j);
    }
    const Forecast forecast = model.step(x, y);
    if (!forecast.y_tilde.allFinite())
      throw std::runtime_error("non-finite forecast on " + format_iso_date(panel.dates()[t]));
    const std::span<const double> scores(forecast.y_tilde.data(), d);

    DecileSelection selection;
    PortfolioState target;
    if (config.strategy == StrategyKind::curds_whey) {
      selection = select_decile(scores, config.decile_fraction, config.mode);
      target = cw_weights(d, selection);
    } else {
      if (config.nbar_input == NbarInput::forecasts) {
        ranker.update(scores, config.execution);
      } else {
        ranker.update(std::span<const double>(y.data(), d), config.execution);
      }
      const auto basis = config.nbar_membership == NbarMembership::by_p ? ranker.posterior() : scores;
      selection = select_decile(basis, config.decile_fraction, config.mode);
      target = nbar_weights(ranker, selection);
    }

    DailyRecord rec;
    rec.date = panel.dates()[t];
    if (config.cost_model == CostModel::half_spread)
      for (std::size_t j = 0; j < d; ++j) rates[j] = spreads(t, j);
    rec.cost = transaction_cost(held, target, rates);
    double bench = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      rec.turnover += std::abs(target.weights[j] - held.weights[j]);
      rec.gross += target.weights[j] * returns(t, j);
      bench += returns(t, j);
    }
    rec.benchmark = bench / static_cast<double>(d);
    rec.net = rec.gross - rec.cost;
    rec.n_long = selection.long_set.size();
    rec.n_short = selection.short_set.size();
    report.records.push_back(rec);

    if (panel.has_sectors()) {
      for (auto j : selection.long_set) ++tallies[panel.sectors()[j]].long_count;
      for (auto j : selection.short_set) ++tallies[panel.sectors()[j]].short_count;
      long_total += selection.long_set.size();
      short_total += selection.short_set.size();
    }
    held = std::move(target);
  }

  std::vector<double> net, bench;
  net.reserve(report.records.size());
  bench.reserve(report.records.size());
  for (const auto& r : report.records) {
    net.push_back(r.net);
    bench.push_back(r.benchmark);
  }
  report.strategy = compute_metrics(net);
  report.benchmark = compute_metrics(bench);
  report.regression_resets = model.resets();

  for (auto& [sector, tally] : tallies) {
    tally.sector = sector;
    tally.long_share = long_total ? static_cast<double>(tally.long_count) / static_cast<double>(long_total) : 0.0;
    tally.short_share = short_total ? static_cast<double>(tally.short_count) / static_cast<double>(short_total) : 0.0;
    report.sectors.push_back(tally);
  }
  return report;
}

}  // namespace seqrank
