#include "seqrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "seqrank/log.hpp"

namespace seqrank {

namespace {

void check_members(std::span<const std::size_t> members, std::size_t d) {
  if (members.empty()) throw std::invalid_argument("member set is empty");
  for (auto j : members)
    if (j >= d) throw std::out_of_range("member index " + std::to_string(j) + " out of range");
}

}  // namespace

NaiveBayesRanker::NaiveBayesRanker(std::size_t d, double tau)
    : d_(d),
      tau_(tau),
      wins_(d * d, 0.0),
      posterior_(d, d ? 1.0 / static_cast<double>(d) : 0.0),
      likelihood_(d, 0.0),
      column_mean_(d, 0.0) {
  if (d < 2) throw std::invalid_argument("ranker needs at least 2 experts");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("ranker decay must satisfy 0 < tau <= 1");
}

NaiveBayesRanker NaiveBayesRanker::from_snapshot(const RankerSnapshot& s) {
  NaiveBayesRanker r(s.d, s.tau);
  if (s.wins.size() != s.d * s.d || s.posterior.size() != s.d ||
      !(s.likelihood.empty() || s.likelihood.size() == s.d))
    throw std::invalid_argument("ranker snapshot has inconsistent shapes");
  double total = 0.0;
  for (double v : s.posterior) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("ranker snapshot posterior must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("ranker snapshot posterior must sum to 1");
  for (double v : s.wins)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("ranker snapshot wins must lie in [0, 1]");
  r.steps_ = s.steps;
  r.wins_ = s.wins;
  r.posterior_ = s.posterior;
  if (!s.likelihood.empty()) r.likelihood_ = s.likelihood;
  return r;
}

RankerSnapshot NaiveBayesRanker::snapshot() const {
  return {d_, tau_, steps_, wins_, posterior_, likelihood_};
}

void NaiveBayesRanker::update(std::span<const double> performance, Execution execution) {
  if (performance.size() != d_)
    throw std::invalid_argument("performance vector has length " + std::to_string(performance.size()) +
                                ", expected " + std::to_string(d_));
  for (double v : performance)
    if (!std::isfinite(v)) throw std::invalid_argument("performance vector must be finite");

  if (execution == Execution::parallel)
    kernels::update_win_columns_parallel(wins_, performance, tau_, column_mean_);
  else
    kernels::update_win_columns_serial(wins_, performance, tau_, column_mean_);

  // The diagonal is 1 - tau^t > 0 after the first step, so the total is positive
  // unless tau == 1 (no learning), where q stays at zero.
  const double total = std::accumulate(column_mean_.begin(), column_mean_.end(), 0.0);
  if (total > 0.0) {
    for (std::size_t j = 0; j < d_; ++j) likelihood_[j] = column_mean_[j] / total;
  }

  double sum = 0.0;
  for (std::size_t j = 0; j < d_; ++j) {
    posterior_[j] = tau_ * posterior_[j] + (1.0 - tau_) * likelihood_[j];
    sum += posterior_[j];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    log::warn("ranker posterior drifted by " + std::to_string(sum - 1.0) + " before renormalisation");
  for (auto& v : posterior_) v /= sum;
  ++steps_;
}

RankOutput NaiveBayesRanker::rank() const {
  RankOutput out;
  out.order.resize(d_);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [this](std::size_t a, std::size_t b) { return posterior_[a] > posterior_[b]; });
  out.posterior = posterior_;
  return out;
}

std::vector<double> NaiveBayesRanker::long_weights(std::span<const std::size_t> members) const {
  check_members(members, d_);
  double total = 0.0;
  for (auto j : members) total += posterior_[j];
  if (!(total > 0.0)) throw std::domain_error("long weights undefined: members have zero posterior mass");
  std::vector<double> w;
  w.reserve(members.size());
  for (auto j : members) w.push_back(posterior_[j] / total);
  return w;
}

std::vector<double> NaiveBayesRanker::short_weights(std::span<const std::size_t> members) const {
  check_members(members, d_);
  double total = 0.0;
  for (auto j : members) total += 1.0 - posterior_[j];
  if (!(total > 0.0)) throw std::domain_error("short weights undefined: every member has posterior 1");
  std::vector<double> w;
  w.reserve(members.size());
  for (auto j : members) w.push_back((1.0 - posterior_[j]) / total);
  return w;
}

double NaiveBayesRanker::ensemble_return(std::span<const double> next_returns, std::size_t k) const {
  if (next_returns.size() != d_) throw std::invalid_argument("next_returns must have length d");
  if (k < 1 || k > d_) throw std::invalid_argument("ensemble size k must be in [1, d]");
  const auto order = rank().order;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    num += next_returns[order[i]] * posterior_[order[i]];
    den += posterior_[order[i]];
  }
  if (!(den > 0.0)) throw std::domain_error("ensemble return undefined: zero posterior mass");
  return num / den;
}

}  // namespace seqrank
