#pragma once

// Naive Bayes asset ranker.
//
// Tracks, for d experts, an exponentially decayed matrix of pairwise wins
//
//     R[:, j] <- tau * R[:, j] + (1 - tau) * s,   s_i = 1{r_j >= r_i}
//
// whose column means r_bar[j] are normalised into a likelihood q that expert
// j outranks the others. The posterior p is the decayed mixture
//
//     p <- tau * p + (1 - tau) * q
//
// and experts are ranked by descending p. Ties in the indicator count as a
// win for both sides; ties in p are broken by ascending index.
//
// All indices are 0-based.

#include <cstddef>
#include <span>
#include <vector>

#include "seqrank/execution.hpp"

namespace seqrank {

struct RankOutput {
  std::vector<std::size_t> order;  // expert indices, best first
  std::vector<double> posterior;   // p at the time of ranking
};

// Snapshot sufficient to resume a ranker; wins is column-major d x d.
struct RankerSnapshot {
  std::size_t d = 0;
  double tau = 1.0;
  std::size_t steps = 0;
  std::vector<double> wins;
  std::vector<double> posterior;
  std::vector<double> likelihood;
};

class NaiveBayesRanker {
 public:
  // Requires d >= 2 and 0 < tau <= 1.
  NaiveBayesRanker(std::size_t d, double tau);

  // Restores from a snapshot; validates shapes and the simplex constraint.
  static NaiveBayesRanker from_snapshot(const RankerSnapshot& snapshot);
  RankerSnapshot snapshot() const;

  // One step of the algorithm with performance vector r (length d, finite).
  void update(std::span<const double> performance, Execution execution = Execution::parallel);

  RankOutput rank() const;

  // p[j] / sum_{i in members} p[i], in the order of `members`.
  std::vector<double> long_weights(std::span<const std::size_t> members) const;
  // (1 - p[j]) / sum_{i in members} (1 - p[i]).
  std::vector<double> short_weights(std::span<const std::size_t> members) const;

  // Posterior-weighted average of next_returns over the top-k ranked experts.
  double ensemble_return(std::span<const double> next_returns, std::size_t k) const;

  std::size_t size() const { return d_; }
  double tau() const { return tau_; }
  std::size_t steps() const { return steps_; }
  // R(i, j): decayed frequency with which expert j scored >= expert i.
  double wins(std::size_t i, std::size_t j) const { return wins_[j * d_ + i]; }
  std::span<const double> posterior() const { return posterior_; }
  std::span<const double> likelihood() const { return likelihood_; }

 private:
  std::size_t d_;
  double tau_;
  std::size_t steps_ = 0;
  std::vector<double> wins_;        // column-major
  std::vector<double> posterior_;
  std::vector<double> likelihood_;
  std::vector<double> column_mean_;  // scratch
};

namespace kernels {

// Decays and refreshes every column of the column-major win matrix and writes
// the column means. Columns are independent; both variants perform the same
// floating-point operations in the same order per column.
void update_win_columns_serial(std::span<double> wins, std::span<const double> performance, double tau,
                               std::span<double> column_mean);
void update_win_columns_parallel(std::span<double> wins, std::span<const double> performance, double tau,
                                 std::span<double> column_mean);

}  // namespace kernels

}  // namespace seqrank
