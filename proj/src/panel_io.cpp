#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

#include "seqrank/timeseries.hpp"

namespace seqrank {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_price(std::string_view text, std::size_t line, const char* column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ParseError(line, std::string("invalid ") + column + " '" + std::string(text) + "'");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

QuotePanel read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_no;

  std::map<std::string, std::size_t, std::less<>> column;
  {
    const auto names = split_fields(line);
    for (std::size_t i = 0; i < names.size(); ++i) column.emplace(std::string(trim(names[i])), i);
  }
  for (const char* required : {"date", "asset", "bid", "ask"})
    if (!column.contains(required))
      throw ParseError(1, std::string("header is missing required column '") + required + "'");
  const auto c_date = column.at("date");
  const auto c_asset = column.at("asset");
  const auto c_bid = column.at("bid");
  const auto c_ask = column.at("ask");
  const std::optional<std::size_t> c_mid =
      column.contains("mid") ? std::optional(column.at("mid")) : std::nullopt;
  const std::optional<std::size_t> c_sector =
      column.contains("sector") ? std::optional(column.at("sector")) : std::nullopt;
  const auto width = column.size();

  std::map<std::string, AssetStream> streams;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != width)
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                    std::to_string(fields.size()));

    Date date;
    try {
      date = parse_iso_date(trim(fields[c_date]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    const std::string asset(trim(fields[c_asset]));
    if (asset.empty()) throw ParseError(line_no, "empty asset identifier");
    const double bid = parse_price(trim(fields[c_bid]), line_no, "bid");
    const double ask = parse_price(trim(fields[c_ask]), line_no, "ask");
    if (!(bid > 0.0)) throw ParseError(line_no, "bid must be positive");
    if (ask < bid) throw ParseError(line_no, "ask below bid for " + asset);
    if (c_mid) {
      const double mid = parse_price(trim(fields[*c_mid]), line_no, "mid");
      if (std::abs(mid - 0.5 * (bid + ask)) > 1e-9 * mid)
        throw ParseError(line_no, "mid is inconsistent with bid/ask");
    }

    auto& stream = streams[asset];
    stream.id = asset;
    if (c_sector) {
      const std::string sector(trim(fields[*c_sector]));
      if (!stream.quotes.empty() && sector != stream.sector)
        throw ParseError(line_no, "sector label changes for " + asset);
      stream.sector = sector;
    }
    if (!stream.quotes.empty()) {
      const Date last = stream.quotes.back().date;
      if (last == date) throw ParseError(line_no, "duplicate row for (" + format_iso_date(date) + ", " + asset + ")");
      if (date < last) throw ParseError(line_no, "dates for " + asset + " are not increasing");
    }
    stream.quotes.push_back({date, bid, ask});
  }

  std::vector<AssetStream> list;
  list.reserve(streams.size());
  for (auto& [id, s] : streams) list.push_back(std::move(s));
  return build_panel(std::move(list));
}

QuotePanel load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_csv(in);
}

void write_csv(const QuotePanel& panel, std::ostream& out) {
  const bool sectors = panel.has_sectors();
  out << "date,asset,bid,ask,mid" << (sectors ? ",sector" : "") << '\n';
  for (std::size_t t = 0; t < panel.n_dates(); ++t) {
    const auto date = format_iso_date(panel.dates()[t]);
    for (std::size_t j = 0; j < panel.n_assets(); ++j) {
      out << date << ',' << panel.assets()[j] << ',' << format_double(panel.bids()(t, j)) << ','
          << format_double(panel.asks()(t, j)) << ',' << format_double(panel.mids()(t, j));
      if (sectors) out << ',' << panel.sectors()[j];
      out << '\n';
    }
  }
}

void write_csv(const QuotePanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(panel, out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace seqrank
