#include "meanfield/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace meanfield {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 72, kRight = 700, kTop = 48, kBottom = 432;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double place(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

Axis fit_axis(const std::vector<PlotSeries>& series, bool take_x, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const PlotSeries& s : series) {
    const std::vector<double>& v = take_x ? s.x : s.y;
    const std::vector<double>& w = take_x ? s.y : s.x;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (log && (v[i] <= 0.0 || w[i] != w[i])) continue;
      const double u = log ? std::log10(v[i]) : v[i];
      if (!std::isfinite(u)) continue;
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
  }
  if (!(lo <= hi)) {
    lo = log ? 0.0 : 0.0;
    hi = log ? 1.0 : 1.0;
  }
  double pad = 0.05 * (hi - lo);
  if (pad == 0.0) pad = log ? 0.5 : (lo == 0.0 ? 1.0 : 0.05 * std::abs(lo));
  Axis ax;
  ax.lo = lo - pad;
  ax.hi = hi + pad;
  ax.log = log;
  return ax;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// tick positions in axis units (log axes tick whole decades)
std::vector<double> ticks_for(const Axis& ax) {
  std::vector<double> out;
  if (ax.log) {
    for (int d = int(std::ceil(ax.lo)); d <= int(std::floor(ax.hi)); ++d) out.push_back(d);
    if (out.empty()) out.push_back(0.5 * (ax.lo + ax.hi));
    return out;
  }
  const double span = ax.hi - ax.lo;
  double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
  if (span / step > 10.0) step *= 2.0;
  if (span / step > 10.0) step *= 2.5;
  for (double v = std::ceil(ax.lo / step) * step; v <= ax.hi + 1e-12 * span; v += step)
    out.push_back(v);
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  const Axis xax = fit_axis(series, true, spec.logx);
  const Axis yax = fit_axis(series, false, spec.logy);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << 0.5 * kWidth << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape(spec.title) << "</text>\n";

  for (double t : ticks_for(xax)) {
    const double px = xax.place(xax.log ? std::pow(10.0, t) : t, kLeft, kRight);
    svg << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px << "\" y2=\"" << kBottom
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(xax.log ? std::pow(10.0, t) : t) << "</text>\n";
  }
  for (double t : ticks_for(yax)) {
    const double py = yax.place(yax.log ? std::pow(10.0, t) : t, kBottom, kTop);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kRight << "\" y2=\"" << py
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(yax.log ? std::pow(10.0, t) : t) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
      << "\" height=\"" << kBottom - kTop << "\" fill=\"none\" stroke=\"#444444\"/>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 6];
    std::ostringstream pts;
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      const double x = series[k].x[i], y = series[k].y[i];
      if ((spec.logx && x <= 0.0) || (spec.logy && y <= 0.0)) continue;
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts << fmt(xax.place(x, kLeft, kRight)) << "," << fmt(yax.place(y, kBottom, kTop)) << " ";
    }
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    const double ly = kTop + 18 + 16 * k;
    svg << "<line x1=\"" << kRight - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kRight - 126
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kRight - 120 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[k].label)
        << "</text>\n";
  }

  if (!spec.annotation.empty())
    svg << "<text x=\"" << kRight - 150 << "\" y=\"" << kTop + 22 + 16 * series.size()
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">"
        << escape(spec.annotation) << "</text>\n";

  svg << "<text x=\"" << 0.5 * (kLeft + kRight) << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(spec.xlabel) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << 0.5 * (kTop + kBottom)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << 0.5 * (kTop + kBottom) << ")\">" << escape(spec.ylabel) << "</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("svg: cannot open " + path + " for writing");
  out << svg.str();
}

}  // namespace meanfield
