#include "seqrank/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqrank::dist {

namespace {

// Continued fraction for I_x(a, b), modified Lentz. Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  return h;
}

template <class Cdf>
double invert_cdf(Cdf cdf, double p, double lo, double hi) {
  // Expand the bracket until it contains p.
  while (cdf(lo) > p) lo = lo < 0 ? lo * 2.0 : lo - 1.0;
  while (cdf(hi) < p) hi = hi > 0 ? hi * 2.0 : hi + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw std::domain_error("t distribution requires dof > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile probability must be in (0, 1)");
  if (!(dof > 0.0)) throw std::domain_error("t distribution requires positive dof");
  if (p == 0.5) return 0.0;
  // Symmetric: solve in the upper half for accuracy.
  if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
  return invert_cdf([dof](double t) { return student_t_cdf(t, dof); }, p, 0.0, 10.0);
}

double fisher_f_cdf(double x, double dof1, double dof2) {
  if (!(dof1 > 0.0) || !(dof2 > 0.0)) throw std::domain_error("F distribution requires positive dof");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return regularized_incomplete_beta(0.5 * dof1, 0.5 * dof2, dof1 * x / (dof1 * x + dof2));
}

double fisher_f_quantile(double p, double dof1, double dof2) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile probability must be in (0, 1)");
  return invert_cdf([=](double x) { return fisher_f_cdf(x, dof1, dof2); }, p, 0.0, 10.0);
}

}  // namespace seqrank::dist
