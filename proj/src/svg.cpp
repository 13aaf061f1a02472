#include "shearlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "shearlab/common.hpp"

namespace shearlab {

namespace {

constexpr double kW = 820, kH = 560;
constexpr double kL = 70, kR = 20, kT = 40, kB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axis {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (lo > hi) {
      lo = 0;
      hi = 1;
    }
    if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series, bool loglog) {
  Axis ax, ay;
  for (const Series& s : series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      double x = s.x[i], y = s.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (loglog && (x <= 0 || y <= 0)) continue;
      ax.grow(loglog ? std::log10(x) : x);
      ay.grow(loglog ? std::log10(y) : y);
    }
  ax.finish();
  ay.finish();

  auto px = [&](double v) { return kL + (v - ax.lo) / (ax.hi - ax.lo) * (kW - kL - kR); };
  auto py = [&](double v) { return kH - kB - (v - ay.lo) / (ay.hi - ay.lo) * (kH - kT - kB); };

  std::FILE* f = std::fopen(path.c_str(), "wb");
  require(f != nullptr, ErrorCode::IoError, "cannot open for write: " + path);
  std::fprintf(f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
               "viewBox=\"0 0 %g %g\">\n<rect width=\"%g\" height=\"%g\" fill=\"white\"/>\n",
               kW, kH, kW, kH, kW, kH);
  std::fprintf(f, "<text x=\"%g\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">%s</text>\n",
               (kL + kW - kR) / 2, title.c_str());

  // gridlines and tick labels
  auto ticks = [&](const Axis& a) {
    std::vector<double> t;
    if (loglog) {
      for (double d = std::ceil(a.lo); d <= std::floor(a.hi) + 1e-9; d += 1.0) t.push_back(d);
      if (t.size() < 2) t = {a.lo, a.hi};
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 5.0);
    }
    return t;
  };
  for (double t : ticks(ax)) {
    std::fprintf(f,
                 "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#dddddd\"/>\n"
                 "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n",
                 px(t), py(ay.lo), px(t), py(ay.hi), px(t), kH - kB + 16,
                 loglog ? std::pow(10.0, t) : t);
  }
  for (double t : ticks(ay)) {
    std::fprintf(f,
                 "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#dddddd\"/>\n"
                 "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                 px(ax.lo), py(t), px(ax.hi), py(t), kL - 6, py(t) + 4,
                 loglog ? std::pow(10.0, t) : t);
  }
  std::fprintf(f,
               "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
               "stroke=\"black\"/>\n",
               kL, kT, kW - kL - kR, kH - kT - kB);
  std::fprintf(f, "<text x=\"%g\" y=\"%g\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
               (kL + kW - kR) / 2, kH - 12, xlabel.c_str());
  std::fprintf(f,
               "<text x=\"16\" y=\"%g\" font-size=\"13\" text-anchor=\"middle\" "
               "transform=\"rotate(-90 16 %g)\">%s</text>\n",
               (kT + kH - kB) / 2, (kT + kH - kB) / 2, ylabel.c_str());

  for (size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::fprintf(f, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"",
                 color);
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      double x = s.x[i], y = s.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (loglog) {
        if (x <= 0 || y <= 0) continue;
        x = std::log10(x);
        y = std::log10(y);
      }
      std::fprintf(f, "%.4g,%.4g ", px(x), py(y));
    }
    std::fprintf(f, "\"/>\n");
    std::fprintf(f,
                 "<rect x=\"%g\" y=\"%g\" width=\"14\" height=\"4\" fill=\"%s\"/>"
                 "<text x=\"%g\" y=\"%g\" font-size=\"12\">%s</text>\n",
                 kL + 10, kT + 12 + 18.0 * double(si), color, kL + 30,
                 kT + 18 + 18.0 * double(si), s.label.c_str());
  }
  std::fprintf(f, "</svg>\n");
  std::fclose(f);
}

}  // namespace shearlab
