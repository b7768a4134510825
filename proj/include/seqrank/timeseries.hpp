#pragma once

// Bid/ask panel data model: quotes, date-aligned panels, mid prices and
// simple returns, plus CSV ingestion/export.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace seqrank {

using Date = std::chrono::year_month_day;

// Row-major so that a cross-section (one date, all assets) is contiguous.
using PanelMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Parses YYYY-MM-DD. Throws std::invalid_argument on anything else.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);

struct Quote {
  Date date;
  double bid = 0.0;
  double ask = 0.0;
};

// 0.5 * (bid + ask). Throws std::domain_error unless ask >= bid > 0.
double mid_price(double bid, double ask);

// mid_now / mid_prev - 1. Throws std::domain_error on a nonpositive price.
double simple_return(double mid_now, double mid_prev);

// Half the quoted spread as a fraction of mid, so that a cost in return space
// is rate * |weight change|.
double half_spread_rate(double bid, double ask);

// One asset's date-sorted quotes as read from a feed or file.
struct AssetStream {
  std::string id;
  std::string sector;  // optional, empty when unknown
  std::vector<Quote> quotes;
};

class QuotePanel {
 public:
  // bids/asks are n x d. Validates every invariant: n >= 3, d >= 2, strictly
  // increasing dates, finite quotes with ask >= bid > 0, unique asset ids.
  QuotePanel(std::vector<Date> dates, std::vector<std::string> assets,
             std::vector<std::string> sectors, PanelMatrix bids, PanelMatrix asks);

  std::size_t n_dates() const { return dates_.size(); }
  std::size_t n_assets() const { return assets_.size(); }

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<std::string>& assets() const { return assets_; }
  // Same length as assets(); entries are empty strings when unlabelled.
  const std::vector<std::string>& sectors() const { return sectors_; }
  bool has_sectors() const;

  const PanelMatrix& bids() const { return bids_; }
  const PanelMatrix& asks() const { return asks_; }
  const PanelMatrix& mids() const { return mids_; }
  // (n - 1) x d; row t is the return from date t to date t + 1.
  const PanelMatrix& returns() const { return returns_; }
  // n x d half-spread rates, see half_spread_rate().
  const PanelMatrix& half_spreads() const { return half_spreads_; }

  // Same mids, spreads multiplied by `factor` around each mid.
  QuotePanel with_scaled_spreads(double factor) const;

  friend bool operator==(const QuotePanel& a, const QuotePanel& b);

 private:
  std::vector<Date> dates_;
  std::vector<std::string> assets_;
  std::vector<std::string> sectors_;
  PanelMatrix bids_;
  PanelMatrix asks_;
  PanelMatrix mids_;
  PanelMatrix returns_;
  PanelMatrix half_spreads_;
};

// Aligns streams on the intersection of their dates. Assets are ordered by
// id, so the result does not depend on stream order. Throws
// std::invalid_argument with fewer than 2 streams, unsorted streams, or fewer
// than 3 common dates.
QuotePanel build_panel(std::vector<AssetStream> streams);

// Raised for malformed CSV input; line() is 1-based and counts the header.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// CSV with a required header naming at least date,asset,bid,ask. Optional
// `mid` (checked against bid/ask) and `sector` columns are recognised.
QuotePanel read_csv(std::istream& in);
QuotePanel load_csv(const std::filesystem::path& path);

// Writes date,asset,bid,ask,mid[,sector] sorted by date then asset, with
// shortest round-trip decimal formatting.
void write_csv(const QuotePanel& panel, std::ostream& out);
void write_csv(const QuotePanel& panel, const std::filesystem::path& path);

}  // namespace seqrank
