#include "mplab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mplab/io.hpp"

namespace mplab {

namespace {

constexpr double W = 640, H = 480;
constexpr double ML = 70, MR = 20, MT = 40, MB = 50;

double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  auto tx = [&](double v) { return spec.log_x ? std::log10(std::max(v, 1e-300)) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(std::max(v, 1e-300)) : v; };
  bool any = false;
  for (const auto& s : spec.series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      x_min = std::min(x_min, tx(s.x[k]));
      x_max = std::max(x_max, tx(s.x[k]));
      y_min = std::min(y_min, ty(s.y[k]));
      y_max = std::max(y_max, ty(s.y[k]));
      any = true;
    }
  }
  if (!any) {
    x_min = 0; x_max = 1; y_min = 0; y_max = 1;
  }
  if (x_max - x_min < 1e-12) { x_min -= 0.5; x_max += 0.5; }
  if (y_max - y_min < 1e-12) { y_min -= 0.5; y_max += 0.5; }
  const double xpad = 0.05 * (x_max - x_min), ypad = 0.08 * (y_max - y_min);
  x_min -= xpad; x_max += xpad; y_min -= ypad; y_max += ypad;

  auto px = [&](double v) { return ML + (tx(v) - x_min) / (x_max - x_min) * (W - ML - MR); };
  auto py = [&](double v) { return H - MB - (ty(v) - y_min) / (y_max - y_min) * (H - MT - MB); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + format_number(ML) + "\" y=\"" + format_number(MT) + "\" width=\"" +
         format_number(W - ML - MR) + "\" height=\"" + format_number(H - MT - MB) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" + spec.title + "</text>\n";
  svg += "<text x=\"320\" y=\"470\" text-anchor=\"middle\" font-size=\"12\" "
         "font-family=\"sans-serif\">" + spec.x_label + "</text>\n";
  svg += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-size=\"12\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 16 240)\">" + spec.y_label +
         "</text>\n";

  // ticks on the transformed scale
  const double sx = tick_step(x_max - x_min), sy = tick_step(y_max - y_min);
  for (double t = std::ceil(x_min / sx) * sx; t <= x_max + 1e-12; t += sx) {
    const double X = ML + (t - x_min) / (x_max - x_min) * (W - ML - MR);
    svg += "<line x1=\"" + format_number(X) + "\" y1=\"" + format_number(H - MB) + "\" x2=\"" +
           format_number(X) + "\" y2=\"" + format_number(H - MB + 5) + "\" stroke=\"#444\"/>\n";
    const std::string lbl = spec.log_x ? ("1e" + format_number(t)) : format_number(t);
    svg += "<text x=\"" + format_number(X) + "\" y=\"" + format_number(H - MB + 18) +
           "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" + lbl +
           "</text>\n";
  }
  for (double t = std::ceil(y_min / sy) * sy; t <= y_max + 1e-12; t += sy) {
    const double Y = H - MB - (t - y_min) / (y_max - y_min) * (H - MT - MB);
    svg += "<line x1=\"" + format_number(ML - 5) + "\" y1=\"" + format_number(Y) + "\" x2=\"" +
           format_number(ML) + "\" y2=\"" + format_number(Y) + "\" stroke=\"#444\"/>\n";
    const std::string lbl = spec.log_y ? ("1e" + format_number(t)) : format_number(t);
    svg += "<text x=\"" + format_number(ML - 8) + "\" y=\"" + format_number(Y + 3) +
           "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" + lbl +
           "</text>\n";
  }

  double ly = MT + 16;
  for (const auto& s : spec.series) {
    if (!s.x.empty()) {
      std::string pts;
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        pts += format_number(px(s.x[k])) + "," + format_number(py(s.y[k]));
        if (k + 1 < s.x.size()) pts += " ";
      }
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
             "\" stroke-width=\"1.5\"/>\n";
      if (s.markers)
        for (std::size_t k = 0; k < s.x.size(); ++k)
          svg += "<circle cx=\"" + format_number(px(s.x[k])) + "\" cy=\"" +
                 format_number(py(s.y[k])) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    svg += "<text x=\"" + format_number(W - MR - 8) + "\" y=\"" + format_number(ly) +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\" fill=\"" +
           s.color + "\">" + s.label + "</text>\n";
    ly += 14;
  }
  if (!spec.annotation.empty())
    svg += "<text x=\"" + format_number(ML + 10) + "\" y=\"" + format_number(H - MB - 10) +
           "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#333\">" + spec.annotation +
           "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace mplab
