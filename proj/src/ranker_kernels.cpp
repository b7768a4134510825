#include <cstddef>

#include "seqrank/ranker.hpp"

namespace seqrank::kernels {

namespace {

inline void update_column(double* column, const double* r, std::size_t d, std::size_t j, double tau,
                          double* column_mean) {
  const double rj = r[j];
  const double fresh = 1.0 - tau;
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double won = rj >= r[i] ? fresh : 0.0;
    column[i] = tau * column[i] + won;
    sum += column[i];
  }
  column_mean[j] = sum / static_cast<double>(d);
}

}  // namespace

void update_win_columns_serial(std::span<double> wins, std::span<const double> performance, double tau,
                               std::span<double> column_mean) {
  const std::size_t d = performance.size();
  for (std::size_t j = 0; j < d; ++j)
    update_column(wins.data() + j * d, performance.data(), d, j, tau, column_mean.data());
}

void update_win_columns_parallel(std::span<double> wins, std::span<const double> performance, double tau,
                                 std::span<double> column_mean) {
  const std::size_t d = performance.size();
  double* w = wins.data();
  const double* r = performance.data();
  double* means = column_mean.data();
  // Below ~64 experts the fork/join costs more than the O(d^2) work.
#pragma omp parallel for schedule(static) if (d >= 64)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(d); ++j)
    update_column(w + static_cast<std::size_t>(j) * d, r, d, static_cast<std::size_t>(j), tau, means);
}

}  // namespace seqrank::kernels
