#pragma once

#include <string>
#include <vector>

#include "amc/scenarios.hpp"

namespace amc {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Static SVG line plot. Points that cannot be drawn on a log axis
/// (non-positive values) are dropped.
std::string render_line_plot(const std::vector<Series>& series, const PlotOptions& options);

/// Analytic BEP against the swept parameter, one line per architecture and
/// knowledge label, log-scaled BEP axis.
std::string render_sweep_plot(const std::vector<SweepRow>& rows);

}  // namespace amc
