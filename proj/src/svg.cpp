#include "amc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "amc/csv.hpp"

namespace amc {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) { return format_number(v, 6); }

struct Axis {
  double lo;
  double hi;
  bool log;

  [[nodiscard]] double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

Axis make_axis(double lo, double hi, bool log) {
  if (log) {
    lo = std::floor(std::log10(lo));
    hi = std::ceil(std::log10(hi));
  }
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi, log};
}

}  // namespace

std::string render_line_plot(const std::vector<Series>& series, const PlotOptions& options) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  std::vector<Series> kept;
  for (const auto& s : series) {
    Series k{s.label, {}, {}};
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (options.log_x && !(s.x[i] > 0.0)) continue;
      if (options.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      k.x.push_back(s.x[i]);
      k.y.push_back(s.y[i]);
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
    kept.push_back(std::move(k));
  }
  if (!std::isfinite(xmin)) {
    xmin = options.log_x ? 1.0 : 0.0;
    xmax = options.log_x ? 10.0 : 1.0;
    ymin = options.log_y ? 1.0 : 0.0;
    ymax = options.log_y ? 10.0 : 1.0;
  }
  const Axis ax = make_axis(xmin, xmax, options.log_x);
  const Axis ay = make_axis(ymin, ymax, options.log_y);
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth) << "\" height=\""
      << px(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << px(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\">"
      << esc(options.title) << "</text>\n"
      << "<rect x=\"" << px(x0) << "\" y=\"" << px(y1) << "\" width=\"" << px(x1 - x0)
      << "\" height=\"" << px(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [&](const Axis& a, bool horizontal) {
    const int n = a.log ? static_cast<int>(a.hi - a.lo) : 5;
    const int step = std::max(1, n / 8);
    for (int i = 0; i <= n; i += step) {
      const double v = a.lo + (a.hi - a.lo) * i / n;
      const std::string label = a.log ? "1e" + std::to_string(static_cast<int>(std::lround(v)))
                                      : format_number(v, 3);
      if (horizontal) {
        const double x = x0 + (x1 - x0) * i / n;
        out << "<line x1=\"" << px(x) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x)
            << "\" y2=\"" << px(y0 + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(x) << "\" y=\"" << px(y0 + 18)
            << "\" text-anchor=\"middle\">" << label << "</text>\n";
      } else {
        const double y = y0 + (y1 - y0) * i / n;
        out << "<line x1=\"" << px(x0 - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x0)
            << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(x0 - 8) << "\" y=\"" << px(y + 4)
            << "\" text-anchor=\"end\">" << label << "</text>\n";
      }
    }
  };
  ticks(ax, true);
  ticks(ay, false);
  out << "<text x=\"" << px((x0 + x1) / 2) << "\" y=\"" << px(kHeight - 10)
      << "\" text-anchor=\"middle\">" << esc(options.x_label) << "</text>\n"
      << "<text x=\"15\" y=\"" << px((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << px((y0 + y1) / 2) << ")\">" << esc(options.y_label) << "</text>\n";

  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto& s = kept[i];
    const char* colour = kColours[i % std::size(kColours)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      out << (j ? " " : "") << px(ax.map(s.x[j], x0, x1)) << ',' << px(ay.map(s.y[j], y0, y1));
    }
    out << "\"/>\n";
    const double ly = y1 + 16.0 * static_cast<double>(i) + 8.0;
    out << "<line x1=\"" << px(x1 + 10) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(x1 + 30)
        << "\" y2=\"" << px(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << px(x1 + 35) << "\" y=\"" << px(ly + 4) << "\">" << esc(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_sweep_plot(const std::vector<SweepRow>& rows) {
  std::vector<Series> series;
  for (const auto& r : rows) {
    std::string label(to_string(r.arch));
    if (!r.knowledge.empty()) label += " " + r.knowledge;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}, {}});
      it = series.end() - 1;
    }
    it->x.push_back(r.param_value);
    it->y.push_back(r.bep_analytic);
  }
  PlotOptions opt;
  if (!rows.empty()) {
    const auto kind = rows.front().scenario;
    opt.title = std::string(to_string(kind));
    opt.x_label = std::string(param_name(kind));
    opt.log_x = kind == ScenarioKind::Scaling || kind == ScenarioKind::IsiTs ||
                kind == ScenarioKind::Interference || kind == ScenarioKind::RatioSweep;
  }
  opt.y_label = "BEP";
  opt.log_y = true;
  return render_line_plot(series, opt);
}

}  // namespace amc
