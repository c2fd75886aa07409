#include "pairprod/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pairprod/error.hpp"

namespace pairprod {
namespace {

constexpr double kLeft = 84.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string px(double v) { return fmt("%.2f", v); }

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  return fmt("%.4g", v);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(hi >= lo); }
  void widen() {
    if (hi > lo) return;
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
};

// Values <= 0 map to `floor` on a log scale.
struct Scale {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;
  double floor = 0.0;

  double unit(double v) const {
    if (log) {
      const double lv = std::log10(std::max(v, floor));
      return (lv - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    }
    return (v - lo) / (hi - lo);
  }
};

Scale make_scale(const std::vector<double>& values, bool log) {
  Scale s;
  s.log = log;
  Range r;
  if (log) {
    double min_pos = std::numeric_limits<double>::infinity();
    double max_pos = 0.0;
    for (double v : values) {
      if (v > 0.0) {
        min_pos = std::min(min_pos, v);
        max_pos = std::max(max_pos, v);
      }
    }
    if (!(max_pos > 0.0)) {
      min_pos = 1.0;
      max_pos = 1.0;
    }
    s.floor = min_pos / 10.0;
    s.lo = std::pow(10.0, std::floor(std::log10(s.floor)));
    s.hi = std::pow(10.0, std::ceil(std::log10(max_pos)));
    if (!(s.hi > s.lo)) s.hi = s.lo * 10.0;
    return s;
  }
  for (double v : values) r.add(v);
  r.widen();
  s.lo = r.lo;
  s.hi = r.hi;
  return s;
}

std::vector<double> ticks(const Scale& s) {
  std::vector<double> out;
  if (s.log) {
    const int first = static_cast<int>(std::lround(std::log10(s.lo)));
    const int last = static_cast<int>(std::lround(std::log10(s.hi)));
    const int stride = std::max(1, (last - first + 7) / 8);
    for (int e = first; e <= last; e += stride) out.push_back(std::pow(10.0, e));
    return out;
  }
  const double raw = (s.hi - s.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  for (double t = std::ceil(s.lo / step) * step; t <= s.hi + 1e-9 * step; t += step) {
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

std::string log_tick_label(double v) { return "1e" + std::to_string(static_cast<int>(std::lround(std::log10(v)))); }

struct Frame {
  double width;
  double height;
  double right;

  double plot_w() const { return width - kLeft - right; }
  double plot_h() const { return height - kTop - kBottom; }
  double px_x(double u) const { return kLeft + u * plot_w(); }
  double px_y(double u) const { return kTop + (1.0 - u) * plot_h(); }
};

std::string header(const Frame& f, const PlotStyle& style) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(static_cast<int>(f.width)) +
         "\" height=\"" + std::to_string(static_cast<int>(f.height)) + "\" viewBox=\"0 0 " +
         std::to_string(static_cast<int>(f.width)) + " " + std::to_string(static_cast<int>(f.height)) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    out += "<text x=\"" + px(f.width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(style.title) + "</text>\n";
  }
  return out;
}

std::string axes(const Frame& f, const PlotStyle& style, const Scale& xs, const Scale& ys) {
  std::string out;
  out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(f.plot_w()) + "\" height=\"" +
         px(f.plot_h()) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(xs)) {
    const double x = f.px_x(xs.unit(t));
    const double y0 = kTop + f.plot_h();
    out += "<line x1=\"" + px(x) + "\" y1=\"" + px(y0) + "\" x2=\"" + px(x) + "\" y2=\"" + px(y0 + 5) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + px(x) + "\" y=\"" + px(y0 + 18) + "\" text-anchor=\"middle\">" +
           (xs.log ? log_tick_label(t) : tick_label(t)) + "</text>\n";
  }
  for (double t : ticks(ys)) {
    const double y = f.px_y(ys.unit(t));
    out += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(kLeft) + "\" y2=\"" + px(y) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" +
           (ys.log ? log_tick_label(t) : tick_label(t)) + "</text>\n";
  }
  out += "<text x=\"" + px(kLeft + f.plot_w() / 2) + "\" y=\"" + px(f.height - 16) +
         "\" text-anchor=\"middle\">" + escape(style.x_label) + "</text>\n";
  const double cy = kTop + f.plot_h() / 2;
  out += "<text x=\"18\" y=\"" + px(cy) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + px(cy) +
         ")\">" + escape(style.y_label) + "</text>\n";
  return out;
}

// Piecewise-linear approximation of a perceptually ordered dark-to-light map.
std::string colour(double u) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  u = std::clamp(u, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(u));
  const double t = u - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<unsigned>(std::lround(stops[i][0] + t * (stops[i + 1][0] - stops[i][0]))),
                static_cast<unsigned>(std::lround(stops[i][1] + t * (stops[i + 1][1] - stops[i][1]))),
                static_cast<unsigned>(std::lround(stops[i][2] + t * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

// Edges halfway between neighbouring samples; outer edges mirror the first and last gaps.
std::vector<double> cell_edges(const std::vector<double>& c) {
  std::vector<double> e(c.size() + 1);
  if (c.size() == 1) {
    const double pad = c[0] == 0.0 ? 0.5 : 0.05 * std::abs(c[0]);
    return {c[0] - pad, c[0] + pad};
  }
  for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
  e.front() = c.front() - (e[1] - c.front());
  e.back() = c.back() + (c.back() - e[c.size() - 1]);
  return e;
}

}  // namespace

std::string render_line_plot(std::span<const PlotSeries> series, const PlotStyle& style) {
  std::vector<double> all_x;
  std::vector<double> all_y;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) throw DomainError("series '" + s.label + "' has mismatched x and y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        all_x.push_back(s.x[i]);
        all_y.push_back(s.y[i]);
      }
    }
  }
  if (all_x.empty()) throw DomainError("nothing to plot: no finite data points");

  const Frame f{static_cast<double>(style.width), static_cast<double>(style.height), 24.0};
  const Scale xs = make_scale(all_x, false);
  const Scale ys = make_scale(all_y, style.log_scale);

  std::string out = header(f, style);
  out += axes(f, style, xs, ys);

  std::string markers;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* stroke = kPalette[k % kPalette.size()];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double x = f.px_x(xs.unit(s.x[i]));
      const double y = f.px_y(ys.unit(s.y[i]));
      if (!points.empty()) points += ' ';
      points += px(x) + ',' + px(y);
      if (ys.log && !(s.y[i] > 0.0)) {
        markers += "<circle class=\"clamped\" cx=\"" + px(x) + "\" cy=\"" + px(y) + "\" r=\"4\" fill=\"none\" stroke=\"" +
                   stroke + "\"/>\n";
      }
    }
    if (points.empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.5\" points=\"" + points +
           "\"/>\n";
  }
  out += markers;

  double ly = kTop + 14;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].label.empty()) continue;
    const double lx = kLeft + f.plot_w() - 130;
    out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(lx + 20) + "\" y2=\"" + px(ly - 4) +
           "\" stroke=\"" + kPalette[k % kPalette.size()] + "\" stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + px(lx + 26) + "\" y=\"" + px(ly) + "\">" + escape(series[k].label) + "</text>\n";
    ly += 16;
  }
  if (!markers.empty()) {
    out += "<text x=\"" + px(kLeft + 6) + "\" y=\"" + px(kTop + f.plot_h() - 6) +
           "\" font-size=\"10\">open circles: values &lt;= 0 drawn at the plot floor</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_heatmap(std::span<const HeatmapColumn> columns, const PlotStyle& style) {
  std::vector<double> xs_v;
  std::vector<double> ys_v;
  std::vector<double> zs_v;
  for (const HeatmapColumn& c : columns) {
    if (c.y.size() != c.z.size()) throw DomainError("heatmap column has mismatched y and z lengths");
    if (c.y.empty()) continue;
    xs_v.push_back(c.x);
    for (std::size_t i = 0; i < c.y.size(); ++i) {
      ys_v.push_back(c.y[i]);
      if (std::isfinite(c.z[i])) zs_v.push_back(c.z[i]);
    }
  }
  if (xs_v.empty() || zs_v.empty()) throw DomainError("nothing to plot: heatmap has no data");

  std::vector<double> col_x;
  for (const HeatmapColumn& c : columns) {
    if (!c.y.empty()) col_x.push_back(c.x);
  }
  const std::vector<double> x_edges = cell_edges(col_x);
  Range xr;
  xr.add(x_edges.front());
  xr.add(x_edges.back());
  xr.widen();
  Range yr;
  for (double y : ys_v) yr.add(y);
  yr.widen();

  const Frame f{static_cast<double>(style.width), static_cast<double>(style.height), 96.0};
  const Scale xs{false, xr.lo, xr.hi, 0.0};
  const Scale ys{false, yr.lo, yr.hi, 0.0};
  const Scale zs = make_scale(zs_v, style.log_scale);

  std::string out = header(f, style);
  std::size_t k = 0;
  for (const HeatmapColumn& c : columns) {
    if (c.y.empty()) continue;
    const double x0 = f.px_x(xs.unit(x_edges[k]));
    const double x1 = f.px_x(xs.unit(x_edges[k + 1]));
    ++k;
    const std::vector<double> y_edges = cell_edges(c.y);
    for (std::size_t i = 0; i < c.y.size(); ++i) {
      if (!std::isfinite(c.z[i])) continue;
      const double y0 = f.px_y(ys.unit(std::clamp(y_edges[i + 1], yr.lo, yr.hi)));
      const double y1 = f.px_y(ys.unit(std::clamp(y_edges[i], yr.lo, yr.hi)));
      out += "<rect x=\"" + px(x0) + "\" y=\"" + px(y0) + "\" width=\"" + px(x1 - x0) + "\" height=\"" +
             px(y1 - y0) + "\" fill=\"" + colour(zs.unit(c.z[i])) + "\"/>\n";
    }
  }
  out += axes(f, style, xs, ys);

  // Colour bar.
  const double bx = kLeft + f.plot_w() + 16;
  const int steps = 64;
  for (int i = 0; i < steps; ++i) {
    const double u0 = static_cast<double>(i) / steps;
    const double y0 = f.px_y(u0 + 1.0 / steps);
    out += "<rect x=\"" + px(bx) + "\" y=\"" + px(y0) + "\" width=\"14\" height=\"" + px(f.plot_h() / steps + 0.5) +
           "\" fill=\"" + colour(u0 + 0.5 / steps) + "\"/>\n";
  }
  for (double t : ticks(zs)) {
    const double u = zs.unit(t);
    if (u < -1e-9 || u > 1.0 + 1e-9) continue;
    out += "<text x=\"" + px(bx + 18) + "\" y=\"" + px(f.px_y(u) + 4) + "\" font-size=\"10\">" +
           (zs.log ? log_tick_label(t) : tick_label(t)) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace pairprod
