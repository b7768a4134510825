#pragma once

// Seeded synthetic bid/ask panels from a correlated Merton-style
// jump-diffusion, used for verification and desk-scale experiments.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "seqrank/timeseries.hpp"

namespace seqrank {

// Portable random stream: std::mt19937_64 (fully specified by the standard)
// feeding our own transforms, because std:: distributions are
// implementation-defined.
//   uniform()  53-bit mantissa in [0, 1)
//   normal()   Box-Muller, both variates used in order
//   poisson()  Knuth multiplication, rates above 16 split into chunks
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  std::uint64_t poisson(double rate);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

struct DriftSwitch {
  std::size_t step = 0;  // first increment (0-based) that uses the new drift
  double drift = 0.0;    // applied to every asset from `step` on
};

struct JumpDiffusionConfig {
  double drift = 0.0003;        // per-step log drift before the Ito correction
  double volatility = 0.01;     // per-step diffusion stdev
  double jump_intensity = 0.02; // expected jumps per step
  double jump_mean = -0.01;     // mean log jump size
  double jump_stdev = 0.03;     // stdev of log jump size
  std::size_t n_steps = 1000;   // increments; the panel has n_steps + 1 dates
  std::size_t n_assets = 10;
  double cross_correlation = 0.2;
  std::uint64_t seed = 1;

  double spread = 0.001;        // full proportional bid/ask spread (10 bp)
  double initial_price = 100.0;
  Date start_date{std::chrono::year{2015}, std::chrono::January, std::chrono::day{2}};

  // Per-asset drifts overriding `drift` when non-empty (length n_assets).
  std::vector<double> asset_drifts;
  std::optional<DriftSwitch> drift_switch;
  // Optional sector labels (length n_assets), copied into the panel.
  std::vector<std::string> sectors;

  // Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

// Log-price increment per asset and step:
//   (mu - sigma^2 / 2) + sigma * z + sum_{i < N} J_i
// with z from an equicorrelated Gaussian vector, N ~ Poisson(intensity) and
// J_i ~ Normal(jump_mean, jump_stdev). Draw order per step: n_assets
// normals, then for each asset its jump count followed by its jump sizes.
// Dates are consecutive weekdays from start_date.
QuotePanel simulate_jump_diffusion(const JumpDiffusionConfig& config);

// Weekdays only, starting at `start` (rolled forward off weekends).
std::vector<Date> business_days(Date start, std::size_t count);

}  // namespace seqrank
