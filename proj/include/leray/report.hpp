#pragma once

#include <string>
#include <utility>
#include <vector>

namespace leray {

/// One log-log scatter with an optional fitted line and slope guide line.
struct LogLogPlot {
    std::string title;
    std::vector<std::pair<double, double>> points;  // (x, y), positive
    bool has_fit = false;
    double fit_slope = 0.0, fit_intercept = 0.0;  // log y = m log x + b
    bool has_guide = false;
    double guide_slope = 0.0;  // anchored at the first point
};

/// Minimal self-contained SVG; byte-identical output for identical input.
void write_loglog_svg(const LogLogPlot& plot, const std::string& path);

}  // namespace leray
