#pragma once

#include <string>
#include <vector>

namespace seqrank::cli {

struct Series {
  std::string label;
  std::string colour;
  std::vector<double> values;
};

// Static line chart (no scripting) of equal-length series against their index.
std::string render_line_chart(const std::string& title, const std::vector<Series>& series,
                              const std::string& first_label, const std::string& last_label);

}  // namespace seqrank::cli
