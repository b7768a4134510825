#include "seqrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace seqrank {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::uint64_t Rng::poisson(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("poisson rate must be finite and >= 0");
  std::uint64_t total = 0;
  while (rate > 0.0) {
    const double chunk = std::min(rate, 16.0);
    rate -= chunk;
    const double limit = std::exp(-chunk);
    double product = uniform();
    std::uint64_t k = 0;
    while (product > limit) {
      ++k;
      product *= uniform();
    }
    total += k;
  }
  return total;
}

void JumpDiffusionConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("jump-diffusion config: " + msg); };
  if (n_assets < 2) fail("n_assets must be >= 2");
  if (n_steps < 2) fail("n_steps must be >= 2");
  if (!(volatility >= 0.0) || !std::isfinite(volatility)) fail("volatility must be >= 0");
  if (!(jump_intensity >= 0.0) || !std::isfinite(jump_intensity)) fail("jump_intensity must be >= 0");
  if (!(jump_stdev >= 0.0) || !std::isfinite(jump_stdev)) fail("jump_stdev must be >= 0");
  if (!std::isfinite(drift) || !std::isfinite(jump_mean)) fail("drift and jump_mean must be finite");
  if (!(std::abs(cross_correlation) <= 1.0)) fail("|cross_correlation| must be <= 1");
  if (cross_correlation < -1.0 / static_cast<double>(n_assets - 1))
    fail("cross_correlation below -1/(n_assets-1) is not a valid equicorrelation");
  if (!(spread >= 0.0) || !(spread < 2.0)) fail("spread must be in [0, 2)");
  if (!(initial_price > 0.0)) fail("initial_price must be positive");
  if (!asset_drifts.empty() && asset_drifts.size() != n_assets) fail("asset_drifts length must equal n_assets");
  if (!sectors.empty() && sectors.size() != n_assets) fail("sectors length must equal n_assets");
  if (drift_switch && drift_switch->step >= n_steps) fail("drift switch step beyond the simulated horizon");
}

std::vector<Date> business_days(Date start, std::size_t count) {
  using namespace std::chrono;
  std::vector<Date> out;
  out.reserve(count);
  sys_days day{start};
  while (out.size() < count) {
    const unsigned wd = weekday{day}.c_encoding();
    if (wd != 0 && wd != 6) out.emplace_back(day);
    day += days{1};
  }
  return out;
}

QuotePanel simulate_jump_diffusion(const JumpDiffusionConfig& config) {
  config.validate();
  const auto d = config.n_assets;
  const auto steps = config.n_steps;
  const double rho = config.cross_correlation;
  const double dd = static_cast<double>(d);
  // Symmetric square root of (1 - rho) I + rho 11^T.
  const double own = std::sqrt(1.0 - rho);
  // Clamped: at rho = -1/(d-1) the argument is zero up to rounding.
  const double common = (std::sqrt(std::max(0.0, 1.0 - rho + rho * dd)) - own) / dd;
  const double var = config.volatility * config.volatility;

  Rng rng(config.seed);
  PanelMatrix mids(steps + 1, d);
  // Cumulative log growth; a flat path then reproduces initial_price exactly.
  std::vector<double> log_growth(d, 0.0);
  std::vector<double> shocks(d);
  for (std::size_t j = 0; j < d; ++j) mids(0, j) = config.initial_price;

  for (std::size_t s = 0; s < steps; ++s) {
    double total = 0.0;
    for (auto& e : shocks) {
      e = rng.normal();
      total += e;
    }
    for (std::size_t j = 0; j < d; ++j) {
      double mu = config.asset_drifts.empty() ? config.drift : config.asset_drifts[j];
      if (config.drift_switch && s >= config.drift_switch->step) mu = config.drift_switch->drift;
      const double z = own * shocks[j] + common * total;
      double increment = (mu - 0.5 * var) + config.volatility * z;
      const auto jumps = rng.poisson(config.jump_intensity);
      for (std::uint64_t i = 0; i < jumps; ++i) increment += config.jump_mean + config.jump_stdev * rng.normal();
      log_growth[j] += increment;
      mids(s + 1, j) = config.initial_price * std::exp(log_growth[j]);
    }
  }

  const double half = 0.5 * config.spread;
  PanelMatrix bids = mids * (1.0 - half);
  PanelMatrix asks = mids * (1.0 + half);

  std::vector<std::string> ids;
  const int width = d < 10 ? 1 : (d < 100 ? 2 : (d < 1000 ? 3 : 4));
  for (std::size_t j = 0; j < d; ++j) {
    std::string num = std::to_string(j + 1);
    ids.push_back("A" + std::string(std::max(0, width - static_cast<int>(num.size())), '0') + num);
  }
  return QuotePanel(business_days(config.start_date, steps + 1), std::move(ids), config.sectors,
                    std::move(bids), std::move(asks));
}

}  // namespace seqrank
