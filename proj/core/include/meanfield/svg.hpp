#pragma once

#include <string>
#include <vector>

namespace meanfield {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  std::string annotation;  // drawn under the legend, e.g. a fitted slope
  bool logx = false, logy = false;
};

// Self-contained SVG line chart, no display machinery.  Nonpositive points
// are dropped on logarithmic axes.
void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace meanfield
