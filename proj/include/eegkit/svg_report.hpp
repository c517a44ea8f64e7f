#pragma once

#include <string>
#include <utility>
#include <vector>

namespace eegkit {

// Small-multiples line figure: one panel per channel, two condition traces
// with +-SD bands, shared axes, and horizontal bars marking significant
// extents. Output is plain SVG text, byte-deterministic for equal input.

struct PanelSeries {
  std::string label;  // condition name, shown in the legend
  std::string color;  // any SVG color
  std::vector<double> mean;
  std::vector<double> sd;  // empty = no band
};

struct Panel {
  std::string title;
  std::vector<PanelSeries> series;
  std::vector<std::pair<double, double>> significant;  // x spans
};

struct FigureSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;  // shared x axis, ascending
  std::vector<Panel> panels;
  int columns{3};
};

std::string render_figure_svg(const FigureSpec& fig);

} // namespace eegkit
