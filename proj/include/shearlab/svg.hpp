#pragma once

#include <string>
#include <vector>

namespace shearlab {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Standalone SVG line plot, no display dependencies.  loglog drops
// nonpositive samples and grids by decades.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series, bool loglog);

}  // namespace shearlab
