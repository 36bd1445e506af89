#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bbm {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  std::optional<double> reference_line;  // horizontal dashed line
  std::string reference_label;
};

/// Self-contained SVG line plot (no scripts, no external fonts or styles).
/// Non-finite points, and nonpositive ones on log axes, are skipped.
void write_svg_plot(const PlotSpec& spec, std::ostream& os);

}  // namespace bbm
