#include "leray/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leray {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << std::fixed << v;
    return ss.str();
}

}  // namespace

void write_loglog_svg(const LogLogPlot& plot, const std::string& path) {
    if (plot.points.empty())
        throw std::invalid_argument("write_loglog_svg: no points");
    const double W = 480, H = 360, ML = 60, MR = 20, MT = 40, MB = 40;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto [x, y] : plot.points) {
        if (!(x > 0) || !(y > 0))
            throw std::invalid_argument("write_loglog_svg: nonpositive datum");
        xmin = std::min(xmin, std::log10(x));
        xmax = std::max(xmax, std::log10(x));
        ymin = std::min(ymin, std::log10(y));
        ymax = std::max(ymax, std::log10(y));
    }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
    const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    auto px = [&](double lx) {
        return ML + (lx - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto py = [&](double ly) {
        return H - MB - (ly - ymin) / (ymax - ymin) * (H - MT - MB);
    };

    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_loglog_svg: cannot open " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"monospace\" font-size=\"13\">" << plot.title
       << "</text>\n";
    // axes
    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
       << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
       << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ML << "\" y=\"" << H - 10
       << "\" font-family=\"monospace\" font-size=\"11\">log10 x: ["
       << fmt(xmin) << ", " << fmt(xmax) << "]  log10 y: [" << fmt(ymin)
       << ", " << fmt(ymax) << "]</text>\n";

    auto line_between = [&](double slope, double ln_intercept,
                            const char* color, const char* dash) {
        // log10 y = slope*log10 x + ln_intercept/ln(10) + ... work in log10:
        // the stored fit is natural-log based; convert.
        const double b10 = ln_intercept / std::log(10.0);
        const double y1 = slope * xmin + b10, y2 = slope * xmax + b10;
        os << "<line x1=\"" << fmt(px(xmin)) << "\" y1=\"" << fmt(py(y1))
           << "\" x2=\"" << fmt(px(xmax)) << "\" y2=\"" << fmt(py(y2))
           << "\" stroke=\"" << color << "\" stroke-dasharray=\"" << dash
           << "\"/>\n";
    };

    if (plot.has_fit) line_between(plot.fit_slope, plot.fit_intercept, "blue", "");
    if (plot.has_guide) {
        // anchor the guide at the first point
        const double lx0 = std::log(plot.points.front().first);
        const double ly0 = std::log(plot.points.front().second);
        line_between(plot.guide_slope, ly0 - plot.guide_slope * lx0, "gray", "4 3");
    }
    for (auto [x, y] : plot.points)
        os << "<circle cx=\"" << fmt(px(std::log10(x))) << "\" cy=\""
           << fmt(py(std::log10(y))) << "\" r=\"3\" fill=\"red\"/>\n";
    os << "</svg>\n";
}

}  // namespace leray
