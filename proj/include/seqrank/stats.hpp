#pragma once

// Nonstationarity diagnostics: Dickey-Fuller unit-root test, Levene's test
// for homogeneity of variance, Welch's two-sample t-test, and the per-asset
// calendar-month report built from them.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqrank/execution.hpp"
#include "seqrank/timeseries.hpp"

namespace seqrank {

enum class Sidedness {
  two_sided,
  upper,  // reject when t > t_{1-alpha}
  lower,  // reject when t < -t_{1-alpha}
};

std::string to_string(Sidedness s);
Sidedness parse_sidedness(std::string_view text);

struct AdfResult {
  double theta0 = 0.0;  // drift
  double theta1 = 0.0;  // coefficient on the lagged level
  double t_stat = 0.0;
  std::size_t n_obs = 0;  // regression observations (series length - 1)
  std::map<double, double> critical_values;
  std::map<double, bool> reject_unit_root;

  // Throws std::out_of_range for a level that was not requested.
  bool rejects(double alpha) const { return reject_unit_root.at(alpha); }
};

// Constant-only Dickey-Fuller critical value for a sample of n_obs
// regression observations (MacKinnon 2010 response surface). Supported
// levels: 0.01, 0.05, 0.10.
double dickey_fuller_critical_value(double alpha, std::size_t n_obs);

// OLS of dy_t on [1, y_{t-1}]; t_stat = theta1 / se(theta1), left-tailed.
// Requires at least 20 points; throws std::domain_error when the series is
// constant or the regression has zero residual variance.
AdfResult adf_test(std::span<const double> series,
                   std::span<const double> alpha_levels = std::span<const double>());

struct TTestResult {
  double t_stat = 0.0;
  double dof = 0.0;  // Welch-Satterthwaite, real-valued
  double critical_value = 0.0;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::upper;
  bool reject = false;
};

// t = (mean(a) - mean(b)) / sqrt(var(a)/n_a + var(b)/n_b). Throws
// std::domain_error when both samples are constant and equal.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                         Sidedness sidedness = Sidedness::upper);

struct LeveneResult {
  double w_stat = 0.0;
  std::size_t dof_between = 0;  // k - 1
  std::size_t dof_within = 0;   // N - k
  double critical_value = 0.0;
  double alpha = 0.05;
  bool reject = false;
};

// Classic Levene W on absolute deviations from the group means.
LeveneResult levene_test(std::span<const std::vector<double>> groups, double alpha = 0.05);

struct StationarityOptions {
  std::size_t max_shift = 12;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::upper;
  std::size_t min_month_obs = 12;
  Execution execution = Execution::parallel;
};

struct MonthGroup {
  int year = 0;
  unsigned month = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double var = 0.0;  // ddof = 1
};

struct ShiftTest {
  std::size_t shift = 0;
  std::size_t month = 0;  // index into AssetStationarity::months of the later month
  TTestResult result;
};

struct AssetStationarity {
  std::string asset;
  std::optional<AdfResult> adf_prices;
  std::optional<AdfResult> adf_returns;
  std::optional<LeveneResult> levene;
  std::vector<MonthGroup> months;
  std::vector<ShiftTest> tests;
  std::size_t degenerate_tests = 0;
  std::vector<std::string> notes;  // reasons for skipped components
};

struct ShiftSummary {
  std::size_t shift = 0;
  std::size_t tests = 0;
  std::size_t rejections = 0;
  double frequency = 0.0;
};

struct StationarityReport {
  StationarityOptions options;
  std::vector<AssetStationarity> assets;
  std::vector<ShiftSummary> rejection_by_shift;  // shifts 1..max_shift
  double price_nonstationary_fraction = 0.0;     // ADF fails to reject on prices
  double return_stationary_fraction = 0.0;       // ADF rejects on returns
  double levene_rejection_fraction = 0.0;
  std::size_t skipped_components = 0;
};

// For each asset: ADF on mid prices and on returns, returns grouped by
// calendar month (months under min_month_obs dropped), Levene across the
// monthly groups, and a Welch test of month m - k (first sample) against
// month m for every shift k in 1..max_shift. Throws std::invalid_argument
// when the panel covers fewer than max_shift + 2 calendar months.
StationarityReport monthly_stationarity_report(const QuotePanel& panel,
                                               const StationarityOptions& options = {});

}  // namespace seqrank
