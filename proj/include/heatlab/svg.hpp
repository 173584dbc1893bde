#pragma once

#include <string>
#include <vector>

namespace heatlab::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool dashed = false;
};

struct PlotOptions {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  int width = 640, height = 420;
};

/// Static SVG line chart with axes, ticks and a legend. Points that are not
/// finite, or not positive on a log axis, are skipped.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& options);

}  // namespace heatlab::svg
