#pragma once

#include <string>
#include <vector>

namespace gnes {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained polyline chart on a fixed 800x500 canvas: axes, tick
/// labels, a legend, and one colored polyline per series. Long series are
/// decimated to keep files small.
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series);

}  // namespace gnes
