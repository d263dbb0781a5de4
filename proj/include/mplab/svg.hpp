#pragma once

#include <string>
#include <vector>

namespace mplab {

struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
  bool markers = true;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::string annotation;  // free text drawn inside the frame
};

/// Hand-emitted deterministic SVG (fixed canvas, no timestamps).  Empty
/// data produces a placeholder with axes.
std::string render_svg(const PlotSpec& spec);

}  // namespace mplab
