#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fplab::detail {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double map(double v) const { return log ? std::log10(v) : v; }
  [[nodiscard]] double unit(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    lo = std::min(lo, a.map(v));
    hi = std::max(hi, a.map(v));
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::string header(double width, double height, const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
                  "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + xml_escape(title) +
       "</text>\n";
  return s;
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string render_line_plot(const LinePlot& plot) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : plot.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  for (const auto& [v, label] : plot.reference) ys.push_back(v);
  const Axis ax = make_axis(xs, plot.log_x);
  const Axis ay = make_axis(ys, plot.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.unit(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.unit(v)) * ph; };

  std::string s = header(kWidth, kHeight, plot.title);
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double gx = kLeft + pw * i / 4.0;
    const double gy = kTop + ph * (1.0 - i / 4.0);
    s += "<line x1=\"" + num(gx) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(gx) + "\" y2=\"" + num(kTop + ph) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(gy) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(gy) +
         "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + num(gx) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
         tick(ax.log ? std::pow(10.0, fx) : fx) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(gy + 4) + "\" text-anchor=\"end\">" +
         tick(ay.log ? std::pow(10.0, fy) : fy) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 18) + "\" text-anchor=\"middle\">" +
       xml_escape(plot.x_label) + (plot.log_x ? " (log)" : "") + "</text>\n";
  s += "<text transform=\"translate(18," + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       xml_escape(plot.y_label) + (plot.log_y ? " (log)" : "") + "</text>\n";

  for (const auto& [v, label] : plot.reference) {
    if (plot.log_y && v <= 0.0) continue;
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(v)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
         num(py(v)) + "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";
    s += "<text x=\"" + num(kLeft + pw - 4) + "\" y=\"" + num(py(v) - 4) + "\" text-anchor=\"end\">" +
         xml_escape(label) + "</text>\n";
  }

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& ser = plot.series[k];
    const std::string colour = kPalette[k % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      const bool ok = std::isfinite(ser.x[i]) && std::isfinite(ser.y[i]) && (!plot.log_x || ser.x[i] > 0.0) &&
                      (!plot.log_y || ser.y[i] > 0.0);
      if (!ok) continue;
      points += num(px(ser.x[i])) + "," + num(py(ser.y[i])) + " ";
      if (ser.markers) {
        s += "<circle cx=\"" + num(px(ser.x[i])) + "\" cy=\"" + num(py(ser.y[i])) + "\" r=\"3\" fill=\"" + colour +
             "\"/>\n";
      }
    }
    s += "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" +
         (ser.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + points + "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    s += "<line x1=\"" + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
         num(kWidth - kRight + 32) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(kWidth - kRight + 36) + "\" y=\"" + num(ly) + "\">" + xml_escape(ser.name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string render_grid(const std::string& title, const std::vector<std::string>& header_row,
                        const std::vector<std::string>& row_labels, const std::vector<std::vector<GridCell>>& cells) {
  const double label_w = 200;
  const double cell_w = 120;
  const double cell_h = 24;
  const double width = label_w + cell_w * static_cast<double>(header_row.size()) + 20;
  const double height = 60 + cell_h * static_cast<double>(row_labels.size() + 1);
  std::string s = header(width, height, title);
  const double y0 = 40;
  for (std::size_t c = 0; c < header_row.size(); ++c) {
    s += "<text x=\"" + num(label_w + cell_w * (c + 0.5)) + "\" y=\"" + num(y0 + 16) +
         "\" text-anchor=\"middle\" font-weight=\"bold\">" + xml_escape(header_row[c]) + "</text>\n";
  }
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    const double y = y0 + cell_h * static_cast<double>(r + 1);
    s += "<text x=\"8\" y=\"" + num(y + 16) + "\">" + xml_escape(row_labels[r]) + "</text>\n";
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      const double x = label_w + cell_w * static_cast<double>(c);
      s += "<rect x=\"" + num(x + 2) + "\" y=\"" + num(y + 2) + "\" width=\"" + num(cell_w - 4) + "\" height=\"" +
           num(cell_h - 4) + "\" fill=\"" + cells[r][c].fill + "\" stroke=\"#999\"/>\n";
      s += "<text x=\"" + num(x + cell_w / 2) + "\" y=\"" + num(y + 16) + "\" text-anchor=\"middle\">" +
           xml_escape(cells[r][c].text) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace fplab::detail
