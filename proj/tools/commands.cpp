#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "seqrank/backtest.hpp"
#include "seqrank/metrics.hpp"
#include "seqrank/ranker.hpp"
#include "seqrank/serialization.hpp"
#include "seqrank/stats.hpp"
#include "seqrank/synthetic.hpp"
#include "svg.hpp"

namespace seqrank::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stages every output in memory and writes them together; if any write fails,
// the files already written are removed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(dir_ / name, std::move(content)); }

  void commit() {
    std::vector<fs::path> written;
    try {
      fs::create_directories(dir_);
      for (const auto& [path, content] : files_) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        written.push_back(path);
        out << content;
        out.close();
        if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) fs::remove(p, ec);
      throw;
    }
  }

  const std::vector<std::pair<fs::path, std::string>>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> files_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RunManifest make_manifest(const std::string& command, json config, const std::vector<fs::path>& inputs,
                          std::optional<std::uint64_t> seed) {
  RunManifest m;
  m.command = command;
  m.config = std::move(config);
  for (const auto& p : inputs) m.inputs.push_back({p.filename().string(), sha256_file(p)});
  m.seed = seed;
  m.tool_version = tool_version();
  m.timestamp = utc_timestamp();
  return m;
}

QuotePanel read_panel(const fs::path& path) {
  if (!fs::exists(path)) throw std::runtime_error("input file '" + path.string() + "' does not exist");
  return load_csv(path);
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
  JumpDiffusionConfig config;
  double trend_fraction = 0.0;
  double trend_drift = 0.001;
  std::size_t switch_step = 0;
  double drift_after = 0.0;
  std::size_t sector_count = 0;
  std::string start_date = "2015-01-02";
  fs::path out_dir = ".";
  std::string name = "panel.csv";
};

void setup_synth(CLI::App& app, SynthArgs& a) {
  auto& c = a.config;
  app.add_option("--assets", c.n_assets, "Number of assets (>= 2)")->capture_default_str();
  app.add_option("--steps", c.n_steps, "Number of daily increments")->capture_default_str();
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--drift", c.drift, "Per-step log drift")->capture_default_str();
  app.add_option("--vol", c.volatility, "Per-step diffusion volatility")->capture_default_str();
  app.add_option("--jumps", c.jump_intensity, "Expected jumps per step")->capture_default_str();
  app.add_option("--jump-mean", c.jump_mean, "Mean log jump size")->capture_default_str();
  app.add_option("--jump-std", c.jump_stdev, "Stdev of log jump size")->capture_default_str();
  app.add_option("--corr", c.cross_correlation, "Cross-asset shock correlation")->capture_default_str();
  app.add_option("--spread", c.spread, "Proportional bid/ask spread")->capture_default_str();
  app.add_option("--price", c.initial_price, "Initial mid price")->capture_default_str();
  app.add_option("--start-date", a.start_date, "First date (YYYY-MM-DD)")->capture_default_str();
  app.add_option("--trend-fraction", a.trend_fraction,
                 "Fraction of assets given +trend-drift (first) and -trend-drift (last)")
      ->capture_default_str();
  app.add_option("--trend-drift", a.trend_drift, "Extra drift for trending assets")->capture_default_str();
  app.add_option("--switch-step", a.switch_step, "Increment at which every drift switches (0 = never)")
      ->capture_default_str();
  app.add_option("--drift-after", a.drift_after, "Drift for all assets after --switch-step")->capture_default_str();
  app.add_option("--sectors", a.sector_count, "Label assets round-robin with this many sectors")->capture_default_str();
  app.add_option("--out-dir", a.out_dir, "Output directory")->capture_default_str();
  app.add_option("--name", a.name, "Output CSV file name")->capture_default_str();
}

int cmd_synth(SynthArgs a, std::ostream& out) {
  auto& c = a.config;
  c.start_date = parse_iso_date(a.start_date);
  if (!(a.trend_fraction >= 0.0 && a.trend_fraction <= 0.5))
    throw std::invalid_argument("--trend-fraction must be in [0, 0.5]");
  if (a.trend_fraction > 0.0 && c.n_assets >= 2) {
    const auto k = static_cast<std::size_t>(std::floor(a.trend_fraction * static_cast<double>(c.n_assets)));
    c.asset_drifts.assign(c.n_assets, c.drift);
    for (std::size_t j = 0; j < k; ++j) {
      c.asset_drifts[j] += a.trend_drift;
      c.asset_drifts[c.n_assets - 1 - j] -= a.trend_drift;
    }
  }
  if (a.switch_step > 0) c.drift_switch = DriftSwitch{a.switch_step, a.drift_after};
  if (a.sector_count > 0) {
    for (std::size_t j = 0; j < c.n_assets; ++j) c.sectors.push_back("S" + std::to_string(j % a.sector_count + 1));
  }

  const QuotePanel panel = simulate_jump_diffusion(c);
  std::ostringstream csv;
  write_csv(panel, csv);

  json config = {{"assets", c.n_assets},     {"steps", c.n_steps},          {"drift", c.drift},
                 {"vol", c.volatility},      {"jumps", c.jump_intensity},   {"jump_mean", c.jump_mean},
                 {"jump_std", c.jump_stdev}, {"corr", c.cross_correlation}, {"spread", c.spread},
                 {"price", c.initial_price}, {"start_date", a.start_date},  {"trend_fraction", a.trend_fraction},
                 {"trend_drift", a.trend_drift}, {"switch_step", a.switch_step}, {"drift_after", a.drift_after},
                 {"sectors", a.sector_count}, {"generator", "mt19937_64 + Box-Muller + Knuth Poisson"}};
  const auto manifest = make_manifest("synth", std::move(config), {}, c.seed);

  OutputSet outputs(a.out_dir);
  outputs.add(a.name, csv.str());
  outputs.add(fs::path(a.name).stem().string() + ".manifest.json", dump(manifest.to_json(true)));
  outputs.commit();
  out << "wrote " << (a.out_dir / a.name).string() << " (" << panel.n_dates() << " dates x " << panel.n_assets()
      << " assets)\n";
  return 0;
}

// --- stationarity --------------------------------------------------------------

struct StationarityArgs {
  fs::path input;
  fs::path out_dir = ".";
  double alpha = 0.05;
  std::size_t max_shift = 12;
  std::string sided = "upper";
  std::size_t min_month_obs = 12;
};

void setup_stationarity(CLI::App& app, StationarityArgs& a) {
  app.add_option("--input", a.input, "Panel CSV")->required();
  app.add_option("--out-dir", a.out_dir, "Output directory")->capture_default_str();
  app.add_option("--alpha", a.alpha, "Significance level (0.01, 0.05 or 0.10)")->capture_default_str();
  app.add_option("--max-shift", a.max_shift, "Largest month shift for mean comparisons")->capture_default_str();
  app.add_option("--sided", a.sided, "t-test sidedness: upper, lower or two-sided")->capture_default_str();
  app.add_option("--min-month-obs", a.min_month_obs, "Smallest usable monthly group")->capture_default_str();
}

struct ColumnSummary {
  std::size_t count = 0;
  double mean = 0, std = 0, min = 0, q25 = 0, q50 = 0, q75 = 0, max = 0;
};

ColumnSummary summarise(std::vector<double> v) {
  ColumnSummary s;
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.min = v.front();
  s.max = v.back();
  s.q25 = sorted_quantile(v, 0.25);
  s.q50 = sorted_quantile(v, 0.5);
  s.q75 = sorted_quantile(v, 0.75);
  return s;
}

std::string render_monthly_table(const StationarityReport& report) {
  std::vector<double> count, mean, var, stat, dof, cv, reject;
  for (const auto& a : report.assets) {
    for (const auto& m : a.months) {
      count.push_back(static_cast<double>(m.count));
      mean.push_back(m.mean);
      var.push_back(m.var);
    }
    for (const auto& t : a.tests) {
      if (t.shift != 1) continue;
      stat.push_back(t.result.t_stat);
      dof.push_back(t.result.dof);
      cv.push_back(t.result.critical_value);
      reject.push_back(t.result.reject ? 1.0 : 0.0);
    }
  }
  const std::vector<std::pair<std::string, ColumnSummary>> cols = {
      {"count", summarise(count)}, {"mean", summarise(mean)}, {"var", summarise(var)},
      {"test stat", summarise(stat)}, {"dof", summarise(dof)}, {"cv", summarise(cv)},
      {"reject H0", summarise(reject)}};

  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << std::setw(8) << "";
  for (const auto& [name, _] : cols) os << std::setw(12) << name;
  os << '\n';
  auto row = [&](const char* label, auto field) {
    os << std::setw(8) << std::left << label << std::right;
    for (const auto& [_, s] : cols) os << std::setw(12) << field(s);
    os << '\n';
  };
  os << std::setw(8) << std::left << "count" << std::right;
  for (const auto& [_, s] : cols) os << std::setw(12) << s.count;
  os << '\n';
  row("mean", [](const ColumnSummary& s) { return s.mean; });
  row("std", [](const ColumnSummary& s) { return s.std; });
  row("min", [](const ColumnSummary& s) { return s.min; });
  row("25%", [](const ColumnSummary& s) { return s.q25; });
  row("50%", [](const ColumnSummary& s) { return s.q50; });
  row("75%", [](const ColumnSummary& s) { return s.q75; });
  row("max", [](const ColumnSummary& s) { return s.max; });

  os << "\nprice series nonstationary: " << report.price_nonstationary_fraction
     << "\nreturn series stationary:   " << report.return_stationary_fraction
     << "\nLevene rejections:          " << report.levene_rejection_fraction << "\n\nshift  tests  rejections  frequency\n";
  for (const auto& s : report.rejection_by_shift)
    os << std::setw(5) << s.shift << std::setw(7) << s.tests << std::setw(12) << s.rejections << std::setw(11)
       << s.frequency << '\n';
  return os.str();
}

int cmd_stationarity(const StationarityArgs& a, std::ostream& out) {
  const QuotePanel panel = read_panel(a.input);
  StationarityOptions opt;
  opt.alpha = a.alpha;
  opt.max_shift = a.max_shift;
  opt.sidedness = parse_sidedness(a.sided);
  opt.min_month_obs = a.min_month_obs;
  const auto report = monthly_stationarity_report(panel, opt);

  json config = {{"alpha", a.alpha}, {"max_shift", a.max_shift}, {"sided", a.sided}, {"min_month_obs", a.min_month_obs}};
  const auto manifest = make_manifest("stationarity", std::move(config), {a.input}, std::nullopt);
  json doc = to_json(report);
  doc["manifest"] = manifest.to_json(false);
  const std::string table = render_monthly_table(report);

  OutputSet outputs(a.out_dir);
  outputs.add("stationarity.json", dump(doc));
  outputs.add("stationarity.txt", table);
  outputs.add("stationarity.manifest.json", dump(manifest.to_json(true)));
  outputs.commit();
  out << table;
  return 0;
}

// --- backtest ------------------------------------------------------------------

struct BacktestArgs {
  fs::path input;
  fs::path out_dir = ".";
  std::string mode = "long-only";
  std::string strategy = "nbar";
  double tau = 0.999;
  double lambda = 1.0;
  std::string stabilisation = "rescale";
  double decile = 0.1;
  std::string nbar_input = "forecasts";
  std::string nbar_membership = "by-p";
  std::string cost = "half-spread";
};

void setup_backtest(CLI::App& app, BacktestArgs& a) {
  app.add_option("--input", a.input, "Panel CSV")->required();
  app.add_option("--out-dir", a.out_dir, "Output directory")->capture_default_str();
  app.add_option("--mode", a.mode, "long-only or long-short")->capture_default_str();
  app.add_option("--strategy", a.strategy, "nbar or curds-whey")->capture_default_str();
  app.add_option("--tau", a.tau, "Exponential decay for both models")->capture_default_str();
  app.add_option("--lambda", a.lambda, "Ridge penalty")->capture_default_str();
  app.add_option("--stabilisation", a.stabilisation, "rescale (tau * P after each downdate) or none")
      ->capture_default_str();
  app.add_option("--decile", a.decile, "Fraction of assets per leg")->capture_default_str();
  app.add_option("--nbar-input", a.nbar_input, "forecasts or realised")->capture_default_str();
  app.add_option("--nbar-membership", a.nbar_membership, "by-p or by-forecast")->capture_default_str();
  app.add_option("--cost", a.cost, "half-spread or zero")->capture_default_str();
}

int cmd_backtest(const BacktestArgs& a, std::ostream& out) {
  BacktestConfig config;
  config.mode = parse_mode(a.mode);
  config.strategy = parse_strategy(a.strategy);
  config.tau = a.tau;
  config.lambda = a.lambda;
  config.stabilisation = parse_stabilisation(a.stabilisation);
  config.decile_fraction = a.decile;
  config.nbar_input = parse_nbar_input(a.nbar_input);
  config.nbar_membership = parse_nbar_membership(a.nbar_membership);
  config.cost_model = parse_cost_model(a.cost);
  config.validate();

  const QuotePanel panel = read_panel(a.input);
  const auto report = run_backtest(panel, config);
  const auto manifest = make_manifest("backtest", to_json(config), {a.input}, std::nullopt);
  json doc = to_json(report);
  doc["manifest"] = manifest.to_json(false);

  std::ostringstream equity;
  equity << "date,cum_net_strategy,cum_net_benchmark\n";
  std::vector<double> cum_strategy, cum_bench;
  double cs = 0.0, cb = 0.0;
  for (const auto& r : report.records) {
    cs += r.net;
    cb += r.benchmark;
    cum_strategy.push_back(cs);
    cum_bench.push_back(cb);
    equity << format_iso_date(r.date) << ',' << json(cs).dump() << ',' << json(cb).dump() << '\n';
  }
  const std::string label = to_string(config.mode) + " " + to_string(config.strategy);
  const std::string svg = render_line_chart(
      "cumulative net return", {{label, "#1f77b4", cum_strategy}, {"equal-weight benchmark", "#7f7f7f", cum_bench}},
      format_iso_date(report.records.front().date), format_iso_date(report.records.back().date));

  OutputSet outputs(a.out_dir);
  outputs.add("backtest.json", dump(doc));
  outputs.add("equity.csv", equity.str());
  outputs.add("equity.svg", svg);
  outputs.add("backtest.manifest.json", dump(manifest.to_json(true)));
  outputs.commit();

  auto show = [](const std::optional<double>& v) {
    std::ostringstream s;
    if (v) s << std::fixed << std::setprecision(3) << *v; else s << "n/a";
    return s.str();
  };
  out << std::fixed << std::setprecision(3) << std::setw(14) << "" << std::setw(12) << "strategy" << std::setw(12)
      << "benchmark\n";
  out << std::setw(14) << std::left << "sum" << std::right << std::setw(12) << report.strategy.sum << std::setw(12)
      << report.benchmark.sum << '\n';
  out << std::setw(14) << std::left << "sr" << std::right << std::setw(12) << show(report.strategy.sharpe)
      << std::setw(12) << show(report.benchmark.sharpe) << '\n';
  out << std::setw(14) << std::left << "max dd" << std::right << std::setw(12) << report.strategy.max_drawdown
      << std::setw(12) << report.benchmark.max_drawdown << '\n';
  return 0;
}

// --- rank ----------------------------------------------------------------------

struct RankArgs {
  fs::path input;
  fs::path out_dir = ".";
  double tau = 0.999;
};

void setup_rank(CLI::App& app, RankArgs& a) {
  app.add_option("--input", a.input, "Panel CSV")->required();
  app.add_option("--out-dir", a.out_dir, "Output directory")->capture_default_str();
  app.add_option("--tau", a.tau, "Ranker decay")->capture_default_str();
}

int cmd_rank(const RankArgs& a, std::ostream& out) {
  const QuotePanel panel = read_panel(a.input);
  NaiveBayesRanker ranker(panel.n_assets(), a.tau);
  json days = json::array();
  const auto& returns = panel.returns();
  std::vector<double> r(panel.n_assets());
  for (Eigen::Index t = 0; t < returns.rows(); ++t) {
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = returns(t, static_cast<Eigen::Index>(j));
    ranker.update(r);
    const auto ranked = ranker.rank();
    std::vector<std::size_t> z;
    for (auto j : ranked.order) z.push_back(j + 1);
    days.push_back({{"date", format_iso_date(panel.dates()[static_cast<std::size_t>(t) + 1])},
                    {"z", std::move(z)},
                    {"p", ranked.posterior}});
  }
  const auto manifest = make_manifest("rank", {{"tau", a.tau}, {"input", "realised"}}, {a.input}, std::nullopt);
  json doc = {{"assets", panel.assets()}, {"tau", a.tau}, {"days", std::move(days)}, {"manifest", manifest.to_json(false)}};

  OutputSet outputs(a.out_dir);
  outputs.add("ranking.json", dump(doc));
  outputs.add("ranking.manifest.json", dump(manifest.to_json(true)));
  outputs.commit();
  out << "ranked " << returns.rows() << " days; leader on the last day: "
      << panel.assets()[ranker.rank().order.front()] << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential asset ranking: synthetic data, stationarity diagnostics, backtests", "seqrank"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  SynthArgs synth;
  StationarityArgs stationarity;
  BacktestArgs backtest;
  RankArgs rank;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a jump-diffusion bid/ask panel");
  setup_synth(*synth_cmd, synth);
  auto* stat_cmd = app.add_subcommand("stationarity", "Unit-root, Levene and monthly mean-shift diagnostics");
  setup_stationarity(*stat_cmd, stationarity);
  auto* bt_cmd = app.add_subcommand("backtest", "Run a strategy backtest with costs");
  setup_backtest(*bt_cmd, backtest);
  auto* rank_cmd = app.add_subcommand("rank", "Rank assets on realised returns day by day");
  setup_rank(*rank_cmd, rank);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (stat_cmd->parsed()) return cmd_stationarity(stationarity, out);
    if (bt_cmd->parsed()) return cmd_backtest(backtest, out);
    if (rank_cmd->parsed()) return cmd_rank(rank, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace seqrank::cli
