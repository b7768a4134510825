#include "seqrank/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace seqrank {

namespace {

unsigned parse_uint(std::string_view text, std::string_view whole) {
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("invalid ISO-8601 date '" + std::string(whole) + "'");
  return value;
}

void check_quote(double bid, double ask) {
  if (!std::isfinite(bid) || !std::isfinite(ask))
    throw std::domain_error("non-finite quote");
  if (!(bid > 0.0)) throw std::domain_error("bid must be positive");
  if (ask < bid) throw std::domain_error("ask below bid");
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw std::invalid_argument("invalid ISO-8601 date '" + std::string(text) + "'");
  const int y = static_cast<int>(parse_uint(text.substr(0, 4), text));
  const unsigned m = parse_uint(text.substr(5, 2), text);
  const unsigned d = parse_uint(text.substr(8, 2), text);
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
  return date;
}

std::string format_iso_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

double mid_price(double bid, double ask) {
  check_quote(bid, ask);
  return 0.5 * (bid + ask);
}

double simple_return(double mid_now, double mid_prev) {
  if (!(mid_now > 0.0) || !(mid_prev > 0.0))
    throw std::domain_error("simple_return requires positive prices");
  return mid_now / mid_prev - 1.0;
}

double half_spread_rate(double bid, double ask) {
  const double mid = mid_price(bid, ask);
  return 0.5 * (ask - bid) / mid;
}

QuotePanel::QuotePanel(std::vector<Date> dates, std::vector<std::string> assets,
                       std::vector<std::string> sectors, PanelMatrix bids, PanelMatrix asks)
    : dates_(std::move(dates)),
      assets_(std::move(assets)),
      sectors_(std::move(sectors)),
      bids_(std::move(bids)),
      asks_(std::move(asks)) {
  const auto n = dates_.size();
  const auto d = assets_.size();
  if (d < 2) throw std::invalid_argument("panel needs at least 2 assets");
  if (n < 3) throw std::invalid_argument("panel needs at least 3 dates to form 2 returns");
  if (sectors_.empty()) sectors_.assign(d, std::string());
  if (sectors_.size() != d) throw std::invalid_argument("sector labels do not match asset count");
  if (static_cast<std::size_t>(bids_.rows()) != n || static_cast<std::size_t>(bids_.cols()) != d ||
      static_cast<std::size_t>(asks_.rows()) != n || static_cast<std::size_t>(asks_.cols()) != d)
    throw std::invalid_argument("bid/ask matrices must be n_dates x n_assets");
  for (std::size_t t = 1; t < n; ++t)
    if (!(dates_[t - 1] < dates_[t])) throw std::invalid_argument("panel dates must be strictly increasing");
  if (std::set<std::string>(assets_.begin(), assets_.end()).size() != d)
    throw std::invalid_argument("duplicate asset identifier");

  mids_.resize(n, d);
  half_spreads_.resize(n, d);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < d; ++j) {
      const double bid = bids_(t, j);
      const double ask = asks_(t, j);
      try {
        check_quote(bid, ask);
      } catch (const std::domain_error& e) {
        throw std::domain_error(std::string(e.what()) + " for " + assets_[j] + " on " +
                                format_iso_date(dates_[t]));
      }
      mids_(t, j) = 0.5 * (bid + ask);
      half_spreads_(t, j) = 0.5 * (ask - bid) / mids_(t, j);
    }
  }
  returns_.resize(n - 1, d);
  for (std::size_t t = 0; t + 1 < n; ++t)
    for (std::size_t j = 0; j < d; ++j) returns_(t, j) = mids_(t + 1, j) / mids_(t, j) - 1.0;
}

bool QuotePanel::has_sectors() const {
  return std::any_of(sectors_.begin(), sectors_.end(), [](const auto& s) { return !s.empty(); });
}

QuotePanel QuotePanel::with_scaled_spreads(double factor) const {
  if (!(factor >= 0.0)) throw std::invalid_argument("spread factor must be nonnegative");
  PanelMatrix bids(bids_.rows(), bids_.cols()), asks(asks_.rows(), asks_.cols());
  for (Eigen::Index i = 0; i < mids_.size(); ++i) {
    const double mid = mids_.data()[i];
    const double half = 0.5 * factor * (asks_.data()[i] - bids_.data()[i]);
    // Snap the half spread to whole units in the last place of the mid so
    // that mid - h and mid + h are exact and average back to the same mid;
    // returns and anything driven by them are then unchanged.
    int exponent = 0;
    std::frexp(mid, &exponent);
    const double ulp = std::ldexp(1.0, exponent - 53);
    double units = std::round(half / ulp);
    if (mid + units * ulp >= std::ldexp(1.0, exponent) &&
        std::fmod(mid / ulp, 2.0) != std::fmod(units, 2.0))
      units += 1.0;  // the ask lands where representable values are 2 ulp apart
    const double bid = mid - units * ulp, ask = mid + units * ulp;
    if (0.5 * (bid + ask) != mid || !(bid > 0.0))
      throw std::domain_error("cannot rescale spread while preserving the mid price");
    bids.data()[i] = bid;
    asks.data()[i] = ask;
  }
  return QuotePanel(dates_, assets_, sectors_, std::move(bids), std::move(asks));
}

bool operator==(const QuotePanel& a, const QuotePanel& b) {
  return a.dates_ == b.dates_ && a.assets_ == b.assets_ && a.sectors_ == b.sectors_ &&
         a.bids_ == b.bids_ && a.asks_ == b.asks_;
}

QuotePanel build_panel(std::vector<AssetStream> streams) {
  if (streams.size() < 2) throw std::invalid_argument("build_panel needs at least 2 asset streams");
  std::sort(streams.begin(), streams.end(),
            [](const AssetStream& a, const AssetStream& b) { return a.id < b.id; });

  std::vector<Date> common;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    const auto& quotes = streams[s].quotes;
    std::vector<Date> dates;
    dates.reserve(quotes.size());
    for (const auto& q : quotes) {
      if (!dates.empty() && !(dates.back() < q.date))
        throw std::invalid_argument("stream '" + streams[s].id + "' is not strictly date-sorted");
      dates.push_back(q.date);
    }
    if (s == 0) {
      common = std::move(dates);
    } else {
      std::vector<Date> out;
      std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(),
                            std::back_inserter(out));
      common = std::move(out);
    }
  }
  if (common.size() < 3)
    throw std::invalid_argument("date intersection has " + std::to_string(common.size()) +
                                " dates; at least 3 are required");

  const auto n = common.size();
  const auto d = streams.size();
  PanelMatrix bids(n, d), asks(n, d);
  std::vector<std::string> ids, sectors;
  for (std::size_t j = 0; j < d; ++j) {
    ids.push_back(streams[j].id);
    sectors.push_back(streams[j].sector);
    std::size_t t = 0;
    for (const auto& q : streams[j].quotes) {
      if (t < n && q.date == common[t]) {
        bids(t, j) = q.bid;
        asks(t, j) = q.ask;
        ++t;
      }
    }
  }
  return QuotePanel(std::move(common), std::move(ids), std::move(sectors), std::move(bids),
                    std::move(asks));
}

}  // namespace seqrank
