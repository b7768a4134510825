#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "seqrank/backtest.hpp"
#include "seqrank/serialization.hpp"
#include "seqrank/synthetic.hpp"

using namespace seqrank;

namespace {

QuotePanel noisy_panel(std::size_t assets = 20, std::size_t steps = 300, std::uint64_t seed = 1) {
  JumpDiffusionConfig cfg;
  cfg.n_assets = assets;
  cfg.n_steps = steps;
  cfg.seed = seed;
  cfg.sectors.clear();
  for (std::size_t j = 0; j < assets; ++j) cfg.sectors.push_back("S" + std::to_string(j % 3 + 1));
  return simulate_jump_diffusion(cfg);
}

// Zero-noise panel: every asset compounds at its own constant rate.
QuotePanel deterministic_panel(std::size_t best) {
  JumpDiffusionConfig cfg;
  cfg.n_assets = 10;
  cfg.n_steps = 200;
  cfg.volatility = 0.0;
  cfg.jump_intensity = 0.0;
  for (std::size_t j = 0; j < 10; ++j) cfg.asset_drifts.push_back(j == best ? 0.002 : 0.0001 * static_cast<double>(j));
  return simulate_jump_diffusion(cfg);
}

}  // namespace

TEST(Backtest, AccountingIdentities) {
  const auto panel = noisy_panel();
  for (auto mode : {Mode::long_only, Mode::long_short})
    for (auto strategy : {StrategyKind::nbar, StrategyKind::curds_whey}) {
      BacktestConfig cfg;
      cfg.mode = mode;
      cfg.strategy = strategy;
      const auto report = run_backtest(panel, cfg);
      ASSERT_EQ(report.records.size(), panel.n_dates() - 2);
      for (std::size_t i = 0; i < report.records.size(); ++i) {
        const auto& r = report.records[i];
        EXPECT_EQ(r.date, panel.dates()[i + 1]);
        EXPECT_EQ(r.net, r.gross - r.cost);
        EXPECT_GE(r.cost, 0.0);
        EXPECT_GE(r.turnover, 0.0);
        EXPECT_LE(r.cost, r.turnover * panel.half_spreads().row(i + 1).maxCoeff() + 1e-18);
        double mean = 0.0;
        for (std::size_t j = 0; j < panel.n_assets(); ++j) mean += panel.returns()(i + 1, j);
        EXPECT_NEAR(r.benchmark, mean / static_cast<double>(panel.n_assets()), 1e-15);
        EXPECT_EQ(r.n_long, 2u);
        EXPECT_EQ(r.n_short, mode == Mode::long_only ? 0u : 2u);
      }
      // The first rebalance buys from a flat book.
      EXPECT_NEAR(report.records.front().turnover, mode == Mode::long_only ? 1.0 : 2.0, 1e-12);
      double sum = 0.0;
      for (const auto& r : report.records) sum += r.net;
      EXPECT_NEAR(report.strategy.sum, sum, 1e-12);
      EXPECT_EQ(report.strategy.days, report.records.size());
    }
}

TEST(Backtest, DeterministicPanelPicksTheLeader) {
  const std::size_t best = 7;
  const auto panel = deterministic_panel(best);
  BacktestConfig cfg;
  cfg.strategy = StrategyKind::curds_whey;
  const auto report = run_backtest(panel, cfg);
  const double leader = std::expm1(0.002);
  for (std::size_t i = 50; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    EXPECT_NEAR(r.gross, leader, 1e-12) << i;
    EXPECT_EQ(r.cost, 0.0) << i;
  }
  EXPECT_GT(report.records.front().cost, 0.0);
}

TEST(Backtest, LongOnlyNbarHoldsNoShorts) {
  const auto report = run_backtest(noisy_panel(), BacktestConfig{});
  for (const auto& r : report.records) {
    EXPECT_EQ(r.n_short, 0u);
    // Fully invested: turnover can never exceed a complete rotation.
    EXPECT_LE(r.turnover, 2.0 + 1e-12);
  }
}

TEST(Backtest, ZeroCostOnlyChangesCosts) {
  const auto panel = noisy_panel();
  BacktestConfig cfg;
  cfg.mode = Mode::long_short;
  const auto with_cost = run_backtest(panel, cfg);
  cfg.cost_model = CostModel::zero;
  const auto free = run_backtest(panel, cfg);
  ASSERT_EQ(with_cost.records.size(), free.records.size());
  for (std::size_t i = 0; i < free.records.size(); ++i) {
    EXPECT_EQ(free.records[i].cost, 0.0);
    EXPECT_EQ(free.records[i].gross, with_cost.records[i].gross);
    EXPECT_EQ(free.records[i].net, free.records[i].gross);
    EXPECT_GE(free.records[i].net, with_cost.records[i].net);
  }
}

TEST(Backtest, DeterministicAndExecutionIndependent) {
  const auto panel = noisy_panel(40, 250, 2);
  BacktestConfig cfg;
  cfg.mode = Mode::long_short;
  cfg.execution = Execution::serial;
  const auto a = to_json(run_backtest(panel, cfg)).dump();
  const auto b = to_json(run_backtest(panel, cfg)).dump();
  cfg.execution = Execution::parallel;
  auto c_json = to_json(run_backtest(panel, cfg));
  auto a_json = nlohmann::json::parse(a);
  a_json["config"].erase("execution");
  c_json["config"].erase("execution");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a_json.dump(), c_json.dump());
}

TEST(Backtest, SectorTallies) {
  const auto panel = noisy_panel();
  BacktestConfig cfg;
  cfg.mode = Mode::long_short;
  const auto report = run_backtest(panel, cfg);
  ASSERT_EQ(report.sectors.size(), 3u);
  std::size_t longs = 0, shorts = 0, expected_longs = 0, expected_shorts = 0;
  double long_share = 0.0, short_share = 0.0;
  for (const auto& s : report.sectors) {
    longs += s.long_count;
    shorts += s.short_count;
    long_share += s.long_share;
    short_share += s.short_share;
  }
  for (const auto& r : report.records) {
    expected_longs += r.n_long;
    expected_shorts += r.n_short;
  }
  EXPECT_EQ(longs, expected_longs);
  EXPECT_EQ(shorts, expected_shorts);
  EXPECT_NEAR(long_share, 1.0, 1e-12);
  EXPECT_NEAR(short_share, 1.0, 1e-12);
  EXPECT_EQ(report.sectors[0].sector, "S1");

  JumpDiffusionConfig plain;
  plain.n_assets = 5;
  plain.n_steps = 50;
  EXPECT_TRUE(run_backtest(simulate_jump_diffusion(plain)).sectors.empty());
}

TEST(Backtest, RejectsShortPanelsAndBadConfig) {
  JumpDiffusionConfig cfg;
  cfg.n_assets = 3;
  cfg.n_steps = 2;
  EXPECT_THROW(run_backtest(simulate_jump_diffusion(cfg)), std::invalid_argument);
  cfg.n_steps = 3;
  EXPECT_EQ(run_backtest(simulate_jump_diffusion(cfg)).records.size(), 2u);
  BacktestConfig bad;
  bad.decile_fraction = 0.0;
  EXPECT_THROW(run_backtest(simulate_jump_diffusion(cfg), bad), std::invalid_argument);
  bad = {};
  bad.tau = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.lambda = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Backtest, EnumNamesRoundTrip) {
  for (auto v : {Mode::long_only, Mode::long_short}) EXPECT_EQ(parse_mode(to_string(v)), v);
  for (auto v : {StrategyKind::nbar, StrategyKind::curds_whey}) EXPECT_EQ(parse_strategy(to_string(v)), v);
  for (auto v : {NbarInput::forecasts, NbarInput::realised}) EXPECT_EQ(parse_nbar_input(to_string(v)), v);
  for (auto v : {NbarMembership::by_p, NbarMembership::by_forecast})
    EXPECT_EQ(parse_nbar_membership(to_string(v)), v);
  for (auto v : {CostModel::half_spread, CostModel::zero}) EXPECT_EQ(parse_cost_model(to_string(v)), v);
  EXPECT_EQ(to_string(Mode::long_short), "long-short");
  EXPECT_THROW(parse_mode("short-only"), std::invalid_argument);
  EXPECT_THROW(parse_cost_model(""), std::invalid_argument);
}

TEST(Backtest, NbarVariantsRun) {
  const auto panel = noisy_panel();
  for (auto input : {NbarInput::forecasts, NbarInput::realised})
    for (auto membership : {NbarMembership::by_p, NbarMembership::by_forecast}) {
      BacktestConfig cfg;
      cfg.mode = Mode::long_short;
      cfg.nbar_input = input;
      cfg.nbar_membership = membership;
      const auto report = run_backtest(panel, cfg);
      EXPECT_TRUE(std::isfinite(report.strategy.sum));
    }
}
