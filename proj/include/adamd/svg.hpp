#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adamd::svg {

// Minimal deterministic SVG 1.1 line-chart emitter.  Fixed 800x600 canvas,
// fixed palette, coordinates rendered with two decimals so identical inputs
// produce byte-identical documents.

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::optional<double> ref_y;  // horizontal dashed reference line
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                           "#d62728", "#9467bd", "#8c564b"};
inline constexpr int kPaletteSize = 6;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Rect {
  double x, y, w, h;
};

struct Range {
  double lo, hi;
  double span() const { return hi - lo; }
};

inline Range pad_degenerate(Range r) {
  if (!(r.hi > r.lo)) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

// Renders one chart panel (axes, ticks, series, legend) into `out`.
inline void render_panel(std::string& out, const Rect& area, const std::vector<Series>& series,
                         const ChartOptions& opt) {
  const double margin_left = 70.0, margin_right = 20.0, margin_top = 34.0, margin_bottom = 46.0;
  const Rect plot{area.x + margin_left, area.y + margin_top,
                  area.w - margin_left - margin_right, area.h - margin_top - margin_bottom};

  bool any = false;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (opt.log_x && !(x > 0.0)) {
        throw std::invalid_argument("svg: log-x chart requires positive x values");
      }
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (!any) {
    xmin = opt.log_x ? 1.0 : 0.0;
    xmax = opt.log_x ? 10.0 : 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (opt.ref_y) {
    ymin = std::min(ymin, *opt.ref_y);
    ymax = std::max(ymax, *opt.ref_y);
  }

  const Range xr = pad_degenerate(opt.log_x ? Range{std::log10(xmin), std::log10(xmax)}
                                            : Range{xmin, xmax});
  Range yr = pad_degenerate({ymin, ymax});
  // Small vertical headroom so curves are not glued to the frame.
  const double ypad = 0.05 * yr.span();
  yr = {yr.lo - ypad, yr.hi + ypad};

  const auto sx = [&](double x) {
    const double v = opt.log_x ? std::log10(x) : x;
    return plot.x + (v - xr.lo) / xr.span() * plot.w;
  };
  const auto sy = [&](double y) { return plot.y + plot.h - (y - yr.lo) / yr.span() * plot.h; };

  // Frame.
  out += "<rect x=\"" + num(plot.x) + "\" y=\"" + num(plot.y) + "\" width=\"" + num(plot.w) +
         "\" height=\"" + num(plot.h) + "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // X ticks: decades for log scale, five even ticks otherwise.
  std::vector<double> xticks;
  if (opt.log_x) {
    const int lo = static_cast<int>(std::ceil(xr.lo - 1e-9));
    const int hi = static_cast<int>(std::floor(xr.hi + 1e-9));
    for (int e = lo; e <= hi; ++e) xticks.push_back(std::pow(10.0, e));
    if (xticks.empty()) xticks = {xmin, xmax};
  } else {
    for (int i = 0; i < 5; ++i) xticks.push_back(xr.lo + xr.span() * i / 4.0);
  }
  for (double tx : xticks) {
    const double px = sx(tx);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(plot.y + plot.h) + "\" x2=\"" + num(px) +
           "\" y2=\"" + num(plot.y + plot.h + 5.0) + "\" stroke=\"#333333\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(plot.y + plot.h + 18.0) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + label_num(tx) + "</text>\n";
  }

  // Y ticks: five even ticks.
  for (int i = 0; i < 5; ++i) {
    const double ty = yr.lo + yr.span() * i / 4.0;
    const double py = sy(ty);
    out += "<line x1=\"" + num(plot.x - 5.0) + "\" y1=\"" + num(py) + "\" x2=\"" + num(plot.x) +
           "\" y2=\"" + num(py) + "\" stroke=\"#333333\"/>\n";
    out += "<text x=\"" + num(plot.x - 8.0) + "\" y=\"" + num(py + 4.0) +
           "\" font-size=\"11\" text-anchor=\"end\">" + label_num(ty) + "</text>\n";
  }

  if (!opt.title.empty()) {
    out += "<text x=\"" + num(plot.x + plot.w / 2.0) + "\" y=\"" + num(area.y + 20.0) +
           "\" font-size=\"14\" text-anchor=\"middle\">" + escape(opt.title) + "</text>\n";
  }
  if (!opt.x_label.empty()) {
    out += "<text x=\"" + num(plot.x + plot.w / 2.0) + "\" y=\"" +
           num(plot.y + plot.h + 36.0) + "\" font-size=\"12\" text-anchor=\"middle\">" +
           escape(opt.x_label) + "</text>\n";
  }
  if (!opt.y_label.empty()) {
    const double lx = area.x + 16.0, ly = plot.y + plot.h / 2.0;
    out += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(lx) + " " +
           num(ly) + ")\">" + escape(opt.y_label) + "</text>\n";
  }

  if (opt.ref_y) {
    const double py = sy(*opt.ref_y);
    out += "<line x1=\"" + num(plot.x) + "\" y1=\"" + num(py) + "\" x2=\"" +
           num(plot.x + plot.w) + "\" y2=\"" + num(py) +
           "\" stroke=\"#d62728\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.points.empty()) continue;
    const char* color = kPalette[i % kPaletteSize];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      if (j > 0) out += ' ';
      out += num(sx(s.points[j].first)) + "," + num(sy(s.points[j].second));
    }
    out += "\"/>\n";
  }

  // Legend, top-right inside the plot.
  double ly = plot.y + 14.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    const double lx = plot.x + plot.w - 190.0;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4.0) + "\" x2=\"" + num(lx + 22.0) +
           "\" y2=\"" + num(ly - 4.0) + "\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 28.0) + "\" y=\"" + num(ly) + "\" font-size=\"11\">" +
           escape(series[i].label) + "</text>\n";
    ly += 15.0;
  }
}

inline std::string document(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
         num(height) +
         "\" font-family=\"sans-serif\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const ChartOptions& opt) {
  constexpr double kWidth = 800.0, kHeight = 600.0;
  std::string out = detail::document(kWidth, kHeight);
  detail::render_panel(out, {0.0, 0.0, kWidth, kHeight}, series, opt);
  out += "</svg>\n";
  return out;
}

/// Two charts stacked vertically on one 800x600 canvas.
inline std::string stacked_chart(const std::vector<Series>& top_series, const ChartOptions& top,
                                 const std::vector<Series>& bottom_series,
                                 const ChartOptions& bottom) {
  constexpr double kWidth = 800.0, kHeight = 600.0;
  std::string out = detail::document(kWidth, kHeight);
  detail::render_panel(out, {0.0, 0.0, kWidth, kHeight / 2.0}, top_series, top);
  detail::render_panel(out, {0.0, kHeight / 2.0, kWidth, kHeight / 2.0}, bottom_series, bottom);
  out += "</svg>\n";
  return out;
}

}  // namespace adamd::svg
