#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <stdexcept>

#include "seqrank/stats.hpp"

namespace seqrank {

namespace {

int month_ordinal(Date d) {
  return static_cast<int>(d.year()) * 12 + static_cast<int>(static_cast<unsigned>(d.month())) - 1;
}

AssetStationarity analyse_asset(const QuotePanel& panel, std::size_t j, const StationarityOptions& opt) {
  AssetStationarity out;
  out.asset = panel.assets()[j];
  const double alpha_levels[] = {opt.alpha};

  const auto n = panel.n_dates();
  std::vector<double> prices(n), returns(n - 1);
  for (std::size_t t = 0; t < n; ++t) prices[t] = panel.mids()(t, j);
  for (std::size_t t = 0; t + 1 < n; ++t) returns[t] = panel.returns()(t, j);

  auto guarded = [&out](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      out.notes.push_back(std::string(what) + ": " + e.what());
    }
  };
  guarded("adf prices", [&] { out.adf_prices = adf_test(prices, alpha_levels); });
  guarded("adf returns", [&] { out.adf_returns = adf_test(returns, alpha_levels); });

  // A return is assigned to the calendar month of the date it ends on.
  std::map<int, std::vector<double>> by_month;
  for (std::size_t t = 0; t + 1 < n; ++t) by_month[month_ordinal(panel.dates()[t + 1])].push_back(returns[t]);

  std::vector<std::vector<double>> groups;
  std::map<int, std::size_t> index_of;
  for (auto& [ordinal, values] : by_month) {
    if (values.size() < opt.min_month_obs) continue;
    MonthGroup g;
    g.year = ordinal / 12;
    g.month = static_cast<unsigned>(ordinal % 12) + 1;
    g.count = values.size();
    g.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - g.mean) * (v - g.mean);
    g.var = ss / static_cast<double>(values.size() - 1);
    index_of[ordinal] = out.months.size();
    out.months.push_back(g);
    groups.push_back(std::move(values));
  }

  if (groups.size() >= 2) {
    guarded("levene", [&] { out.levene = levene_test(groups, opt.alpha); });
  } else {
    out.notes.push_back("levene: fewer than 2 valid monthly groups");
  }

  for (std::size_t k = 1; k <= opt.max_shift; ++k) {
    for (const auto& [ordinal, later] : index_of) {
      const auto earlier = index_of.find(ordinal - static_cast<int>(k));
      if (earlier == index_of.end()) continue;
      try {
        out.tests.push_back({k, later, welch_t_test(groups[earlier->second], groups[later], opt.alpha, opt.sidedness)});
      } catch (const std::domain_error&) {
        ++out.degenerate_tests;
      }
    }
  }
  return out;
}

}  // namespace

StationarityReport monthly_stationarity_report(const QuotePanel& panel, const StationarityOptions& options) {
  if (options.max_shift < 1) throw std::invalid_argument("max_shift must be >= 1");
  if (options.min_month_obs < 2) throw std::invalid_argument("min_month_obs must be >= 2");
  dickey_fuller_critical_value(options.alpha, 100);  // validates alpha against the table
  const int span = month_ordinal(panel.dates().back()) - month_ordinal(panel.dates().front()) + 1;
  if (span < static_cast<int>(options.max_shift) + 2)
    throw std::invalid_argument("panel spans " + std::to_string(span) + " calendar months; max_shift " +
                                std::to_string(options.max_shift) + " needs at least " +
                                std::to_string(options.max_shift + 2));

  StationarityReport report;
  report.options = options;
  const auto d = panel.n_assets();
  report.assets.resize(d);

  if (options.execution == Execution::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(d); ++j) {
      try {
        report.assets[j] = analyse_asset(panel, static_cast<std::size_t>(j), options);
      } catch (...) {
#pragma omp critical
        failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t j = 0; j < d; ++j) report.assets[j] = analyse_asset(panel, j, options);
  }

  // Aggregation runs in asset order regardless of execution mode.
  report.rejection_by_shift.resize(options.max_shift);
  for (std::size_t k = 0; k < options.max_shift; ++k) report.rejection_by_shift[k].shift = k + 1;
  std::size_t adf_p = 0, adf_p_nonstat = 0, adf_r = 0, adf_r_stat = 0, lev = 0, lev_rej = 0;
  for (const auto& a : report.assets) {
    report.skipped_components += a.notes.size();
    if (a.adf_prices) {
      ++adf_p;
      if (!a.adf_prices->rejects(options.alpha)) ++adf_p_nonstat;
    }
    if (a.adf_returns) {
      ++adf_r;
      if (a.adf_returns->rejects(options.alpha)) ++adf_r_stat;
    }
    if (a.levene) {
      ++lev;
      if (a.levene->reject) ++lev_rej;
    }
    for (const auto& t : a.tests) {
      auto& s = report.rejection_by_shift[t.shift - 1];
      ++s.tests;
      if (t.result.reject) ++s.rejections;
    }
  }
  for (auto& s : report.rejection_by_shift)
    s.frequency = s.tests ? static_cast<double>(s.rejections) / static_cast<double>(s.tests) : 0.0;
  auto frac = [](std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; };
  report.price_nonstationary_fraction = frac(adf_p_nonstat, adf_p);
  report.return_stationary_fraction = frac(adf_r_stat, adf_r);
  report.levene_rejection_fraction = frac(lev_rej, lev);
  return report;
}

}  // namespace seqrank
