#include "seqrank/stats.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "seqrank/distributions.hpp"

namespace seqrank {

namespace {

constexpr std::array<double, 3> kDefaultAdfLevels{0.01, 0.05, 0.10};

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

std::string to_string(Sidedness s) {
  switch (s) {
    case Sidedness::two_sided: return "two-sided";
    case Sidedness::upper: return "upper";
    case Sidedness::lower: return "lower";
  }
  return "?";
}

Sidedness parse_sidedness(std::string_view text) {
  if (text == "two-sided") return Sidedness::two_sided;
  if (text == "upper") return Sidedness::upper;
  if (text == "lower") return Sidedness::lower;
  throw std::invalid_argument("unknown sidedness '" + std::string(text) + "'");
}

double dickey_fuller_critical_value(double alpha, std::size_t n_obs) {
  // tau_c response surface: b0 + b1/T + b2/T^2 + b3/T^3
  struct Row { double alpha, b0, b1, b2, b3; };
  static constexpr std::array<Row, 3> kTable{{
      {0.01, -3.43035, -6.5393, -16.786, -79.433},
      {0.05, -2.86154, -2.8903, -4.234, -40.040},
      {0.10, -2.56677, -1.5384, -2.809, 0.0},
  }};
  if (n_obs == 0) throw std::invalid_argument("n_obs must be positive");
  const double inv = 1.0 / static_cast<double>(n_obs);
  for (const auto& r : kTable)
    if (std::abs(r.alpha - alpha) < 1e-12) return r.b0 + inv * (r.b1 + inv * (r.b2 + inv * r.b3));
  throw std::invalid_argument("Dickey-Fuller critical values exist only for alpha in {0.01, 0.05, 0.10}");
}

AdfResult adf_test(std::span<const double> series, std::span<const double> alpha_levels) {
  if (series.size() < 20) throw std::invalid_argument("adf_test needs at least 20 observations");
  if (!all_finite(series)) throw std::invalid_argument("adf_test input must be finite");
  if (alpha_levels.empty()) alpha_levels = kDefaultAdfLevels;

  const std::size_t m = series.size() - 1;
  const auto lagged = series.first(m);
  double ybar = 0.0, dybar = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    ybar += lagged[t];
    dybar += series[t + 1] - series[t];
  }
  ybar /= static_cast<double>(m);
  dybar /= static_cast<double>(m);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const double dx = lagged[t] - ybar;
    sxx += dx * dx;
    sxy += dx * ((series[t + 1] - series[t]) - dybar);
  }
  if (!(sxx > 0.0)) throw std::domain_error("adf_test: constant series");

  AdfResult out;
  out.n_obs = m;
  out.theta1 = sxy / sxx;
  out.theta0 = dybar - out.theta1 * ybar;
  double ssr = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const double e = (series[t + 1] - series[t]) - out.theta0 - out.theta1 * lagged[t];
    ssr += e * e;
  }
  const double s2 = ssr / static_cast<double>(m - 2);
  // Relative to the scale of the differences, a residual this small is an
  // exact fit (e.g. a deterministic trend).
  double scale = 0.0;
  for (std::size_t t = 0; t < m; ++t) scale += (series[t + 1] - series[t]) * (series[t + 1] - series[t]);
  if (!(s2 > 1e-24 * (scale / static_cast<double>(m))) || !(s2 > 0.0))
    throw std::domain_error("adf_test: zero residual variance");

  out.t_stat = out.theta1 / std::sqrt(s2 / sxx);
  for (double alpha : alpha_levels) {
    const double cv = dickey_fuller_critical_value(alpha, m);
    out.critical_values[alpha] = cv;
    out.reject_unit_root[alpha] = out.t_stat < cv;
  }
  return out;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha,
                         Sidedness sidedness) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test needs at least 2 observations per sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  if (!all_finite(a) || !all_finite(b)) throw std::invalid_argument("welch_t_test input must be finite");

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_variance(a, ma) / na;
  const double vb = sample_variance(b, mb) / nb;
  const double se2 = va + vb;

  TTestResult out;
  out.alpha = alpha;
  out.sidedness = sidedness;
  if (se2 > 0.0) {
    out.t_stat = (ma - mb) / std::sqrt(se2);
    out.dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  } else {
    if (ma == mb) throw std::domain_error("welch_t_test: both samples constant and equal");
    out.t_stat = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    out.dof = na + nb - 2.0;
  }

  const double tail = sidedness == Sidedness::two_sided ? alpha / 2.0 : alpha;
  out.critical_value = dist::student_t_quantile(1.0 - tail, out.dof);
  switch (sidedness) {
    case Sidedness::two_sided: out.reject = std::abs(out.t_stat) > out.critical_value; break;
    case Sidedness::upper: out.reject = out.t_stat > out.critical_value; break;
    case Sidedness::lower: out.reject = out.t_stat < -out.critical_value; break;
  }
  return out;
}

LeveneResult levene_test(std::span<const std::vector<double>> groups, double alpha) {
  const std::size_t k = groups.size();
  if (k < 2) throw std::invalid_argument("levene_test needs at least 2 groups");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");

  std::vector<std::vector<double>> dev(k);
  std::size_t total = 0;
  double grand = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    const auto& x = groups[g];
    if (x.size() < 2) throw std::invalid_argument("levene_test groups need at least 2 observations");
    if (!all_finite(x)) throw std::invalid_argument("levene_test input must be finite");
    const double m = mean_of(x);
    dev[g].reserve(x.size());
    for (double v : x) {
      dev[g].push_back(std::abs(v - m));
      grand += dev[g].back();
    }
    total += x.size();
  }
  grand /= static_cast<double>(total);

  double between = 0.0, within = 0.0;
  for (const auto& z : dev) {
    const double zbar = mean_of(z);
    between += static_cast<double>(z.size()) * (zbar - grand) * (zbar - grand);
    for (double v : z) within += (v - zbar) * (v - zbar);
  }

  LeveneResult out;
  out.alpha = alpha;
  out.dof_between = k - 1;
  out.dof_within = total - k;
  if (within > 0.0) {
    out.w_stat = static_cast<double>(total - k) / static_cast<double>(k - 1) * between / within;
  } else if (between > 0.0) {
    out.w_stat = std::numeric_limits<double>::infinity();
  } else {
    throw std::domain_error("levene_test: statistic undefined (no dispersion within or between groups)");
  }
  out.critical_value = dist::fisher_f_quantile(1.0 - alpha, static_cast<double>(out.dof_between),
                                               static_cast<double>(out.dof_within));
  out.reject = out.w_stat > out.critical_value;
  return out;
}

}  // namespace seqrank
