#include "gnes/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gnes/types.hpp"

namespace gnes {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 500;
constexpr int kLeft = 62;
constexpr int kRight = 16;
constexpr int kTop = 34;
constexpr int kBottom = 46;
constexpr int kMaxPointsPerSeries = 1200;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range span(const std::vector<SvgSeries>& series, bool horizontal) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series)
    for (double v : horizontal ? s.x : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

double nice_step(double range, int target_ticks) {
  const double raw = range / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0})
    if (raw <= mult * mag) return mult * mag;
  return 10.0 * mag;
}

std::string tick_label(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series) {
  for (const auto& s : series)
    if (s.x.size() != s.y.size())
      throw ContractViolation("render_line_chart: series '" + s.label +
                              "' has mismatched x/y lengths");

  const Range rx = span(series, true);
  const Range ry = span(series, false);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) {
    return kLeft + plot_w * (v - rx.lo) / (rx.hi - rx.lo);
  };
  auto py = [&](double v) {
    return kTop + plot_h * (1.0 - (v - ry.lo) / (ry.hi - ry.lo));
  };

  std::ostringstream out;
  out.precision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\" font-size=\"15\">" << escape(title)
      << "</text>\n";

  // grid and ticks
  const double sx = nice_step(rx.hi - rx.lo, 6);
  const double sy = nice_step(ry.hi - ry.lo, 6);
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double v = std::ceil(rx.lo / sx) * sx; v <= rx.hi + 1e-9 * sx; v += sx) {
    const double x = px(v);
    out << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x
        << "\" y2=\"" << kTop + plot_h << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
  }
  for (double v = std::ceil(ry.lo / sy) * sy; v <= ry.hi + 1e-9 * sy; v += sy) {
    const double y = py(v);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"12\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"12\" transform=\"rotate(-90 14 " << kTop + plot_h / 2
      << ")\">" << escape(y_label) << "</text>\n";

  const int n_colors = static_cast<int>(std::size(kPalette));
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.x.empty()) continue;
    const std::size_t stride =
        1 + (s.x.size() - 1) / static_cast<std::size_t>(kMaxPointsPerSeries);
    out << "<polyline fill=\"none\" stroke=\""
        << kPalette[si % n_colors] << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t j = 0; j < s.x.size(); j += stride)
      out << px(s.x[j]) << ',' << py(s.y[j]) << ' ';
    // always close with the last point so the endpoint is exact
    out << px(s.x.back()) << ',' << py(s.y.back());
    out << "\"/>\n";
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const int legend_x = kLeft + 10;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const int y = kTop + 14 + static_cast<int>(si) * 15;
    if (y > kTop + static_cast<int>(plot_h) - 6) break;
    out << "<line x1=\"" << legend_x << "\" y1=\"" << y - 4 << "\" x2=\""
        << legend_x + 18 << "\" y2=\"" << y - 4 << "\" stroke=\""
        << kPalette[si % n_colors] << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << legend_x + 23 << "\" y=\"" << y << "\">"
        << escape(series[si].label) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace gnes
