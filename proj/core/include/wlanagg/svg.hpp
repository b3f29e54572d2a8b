#ifndef WLANAGG_SVG_HPP
#define WLANAGG_SVG_HPP

#include <string>
#include <vector>

namespace wlanagg {

// One plotted series. Line series are drawn as a polyline; marker series
// as circles with optional symmetric error bars.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // empty or same length as y
  bool line = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 720;
  int height = 480;
  bool log_x = false;
};

// Renders a line/marker plot as a standalone SVG document. Output is a
// pure function of the spec (no timestamps, fixed formatting).
std::string render_svg(const PlotSpec& spec);

}  // namespace wlanagg

#endif  // WLANAGG_SVG_HPP
