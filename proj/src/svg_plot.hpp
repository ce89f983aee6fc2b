#pragma once

// Minimal static SVG line plots and status grids.

#include <string>
#include <vector>

namespace fplab::detail {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = true;
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  /// Horizontal reference lines (value, label).
  std::vector<std::pair<double, std::string>> reference;
};

std::string render_line_plot(const LinePlot& plot);

struct GridCell {
  std::string text;
  std::string fill;  // CSS colour
};

/// Table figure: header row, then one row per entry with a label column.
std::string render_grid(const std::string& title, const std::vector<std::string>& header,
                        const std::vector<std::string>& row_labels, const std::vector<std::vector<GridCell>>& cells);

std::string xml_escape(const std::string& text);

}  // namespace fplab::detail
