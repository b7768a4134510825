#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace seqrank::cli {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::vector<Series>& series,
                              const std::string& first_label, const std::string& last_label) {
  constexpr double kWidth = 800, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t n = 0;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo = (n ? lo : 0.0) - 1.0;
    hi = lo + 2.0;
  }
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](std::size_t i) { return kLeft + (n > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0); };
  auto py = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape(title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (lo < 0.0 && hi > 0.0)
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << fmt(py(0.0)) << "\" y2=\""
        << fmt(py(0.0)) << "\" stroke=\"#ccc\" stroke-dasharray=\"4 4\"/>\n";
  for (const auto& [v, y] : {std::pair{hi, py(hi)}, std::pair{lo, py(lo)}})
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(v, "%.3f") << "</text>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(first_label) << "</text>\n"
      << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kHeight - kBottom + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << escape(last_label) << "</text>\n";

  double legend_x = kLeft;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << escape(s.colour) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) svg << (i ? " " : "") << fmt(px(i)) << ',' << fmt(py(s.values[i]));
    svg << "\"/>\n";
    svg << "<rect x=\"" << legend_x << "\" y=\"" << kHeight - 18 << "\" width=\"12\" height=\"3\" fill=\""
        << escape(s.colour) << "\"/>\n"
        << "<text x=\"" << legend_x + 16 << "\" y=\"" << kHeight - 13
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
    legend_x += 200;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace seqrank::cli
