#include "wlanagg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace wlanagg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Round the raw tick step to a 1/2/5 decade multiple.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.5) step = 1.0;
  else if (norm <= 3.5) step = 2.0;
  else if (norm <= 7.5) step = 5.0;
  return step * mag;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("render_svg: no series");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : spec.series) {
    if (s.x.size() != s.y.size() ||
        (!s.yerr.empty() && s.yerr.size() != s.y.size())) {
      throw std::invalid_argument("render_svg: series size mismatch");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double e = s.yerr.empty() || !std::isfinite(s.yerr[i]) ? 0.0 : s.yerr[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - e);
      ymax = std::max(ymax, s.y[i] + e);
    }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
    throw std::invalid_argument("render_svg: no finite data points");
  }
  if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
  if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
  // headroom
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  if (ymin > 0.0 && ymin < 0.3 * (ymax - ymin)) ymin = 0.0;

  const double ml = 72, mr = 24, mt = 40, mb = 56;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return mt + ph - (v - ymin) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
         "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt2(ml + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + spec.title + "</text>\n";

  // gridlines + ticks
  const double xstep = nice_step(xmax - xmin, 6);
  const double ystep = nice_step(ymax - ymin, 6);
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    const double px = sx(t);
    svg += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(px) +
           "\" y2=\"" + fmt2(mt + ph) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt2(px) + "\" y=\"" + fmt2(mt + ph + 16) +
           "\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
  }
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
    const double py = sy(t);
    svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(py) + "\" x2=\"" + fmt2(ml + pw) +
           "\" y2=\"" + fmt2(py) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt2(ml - 6) + "\" y=\"" + fmt2(py + 4) +
           "\" text-anchor=\"end\">" + fmt(t) + "</text>\n";
  }
  svg += "</g>\n";

  // axes
  svg += "<rect x=\"" + fmt2(ml) + "\" y=\"" + fmt2(mt) + "\" width=\"" + fmt2(pw) +
         "\" height=\"" + fmt2(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg += "<text x=\"" + fmt2(ml + pw / 2) + "\" y=\"" + fmt2(mt + ph + 40) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         spec.x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt2(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + fmt2(mt + ph / 2) + ")\">" + spec.y_label +
         "</text>\n";

  // data
  int color_idx = 0;
  double legend_y = mt + 14;
  for (const PlotSeries& s : spec.series) {
    const char* color = kPalette[color_idx % 8];
    ++color_idx;
    if (s.line) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        pts += fmt2(sx(s.x[i])) + "," + fmt2(sy(s.y[i])) + " ";
      }
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.8\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        const double px = sx(s.x[i]), py = sy(s.y[i]);
        if (!s.yerr.empty() && std::isfinite(s.yerr[i]) && s.yerr[i] > 0) {
          const double e1 = sy(s.y[i] - s.yerr[i]), e0 = sy(s.y[i] + s.yerr[i]);
          svg += "<line x1=\"" + fmt2(px) + "\" y1=\"" + fmt2(e0) + "\" x2=\"" + fmt2(px) +
                 "\" y2=\"" + fmt2(e1) + "\" stroke=\"" + color + "\" stroke-width=\"1.2\"/>\n";
          svg += "<line x1=\"" + fmt2(px - 4) + "\" y1=\"" + fmt2(e0) + "\" x2=\"" +
                 fmt2(px + 4) + "\" y2=\"" + fmt2(e0) + "\" stroke=\"" + color + "\"/>\n";
          svg += "<line x1=\"" + fmt2(px - 4) + "\" y1=\"" + fmt2(e1) + "\" x2=\"" +
                 fmt2(px + 4) + "\" y2=\"" + fmt2(e1) + "\" stroke=\"" + color + "\"/>\n";
        }
        svg += "<circle cx=\"" + fmt2(px) + "\" cy=\"" + fmt2(py) +
               "\" r=\"3.2\" fill=\"" + color + "\"/>\n";
      }
    }
    // legend entry
    svg += "<line x1=\"" + fmt2(ml + 10) + "\" y1=\"" + fmt2(legend_y - 4) + "\" x2=\"" +
           fmt2(ml + 34) + "\" y2=\"" + fmt2(legend_y - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt2(ml + 40) + "\" y=\"" + fmt2(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
    legend_y += 16;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace wlanagg
