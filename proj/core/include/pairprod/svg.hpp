#pragma once

// Minimal standalone SVG rendering. Output depends only on the input values, so
// identical data produces identical bytes.

#include <span>
#include <string>
#include <vector>

namespace pairprod {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  std::string title;
  /// Axis labels, including units.
  std::string x_label;
  std::string y_label;
  /// Log ordinate for line plots, log colour scale for heatmaps. Values <= 0 are
  /// clamped to the plot floor (a tenth of the smallest positive value) and drawn
  /// with an open-circle marker.
  bool log_scale = false;
  int width = 720;
  int height = 450;
};

/// One polyline per series. Throws DomainError when there is no finite point.
std::string render_line_plot(std::span<const PlotSeries> series, const PlotStyle& style);

/// Column of a heatmap: values z at ordinates y (increasing), drawn at abscissa x.
struct HeatmapColumn {
  double x = 0.0;
  std::vector<double> y;
  std::vector<double> z;
};

/// Cells span halfway to neighbouring samples. Throws DomainError when empty.
std::string render_heatmap(std::span<const HeatmapColumn> columns, const PlotStyle& style);

}  // namespace pairprod
