#include "gridfreq/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace gridfreq {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 22;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 48;

std::string fmt(const char* pattern, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// Keep at most kMaxPolylinePoints indices, endpoints included.
std::vector<std::size_t> decimate(std::size_t n)
{
    std::vector<std::size_t> idx;
    if (n <= kMaxPolylinePoints) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            idx[i] = i;
        }
        return idx;
    }
    const std::size_t stride = (n - 1 + kMaxPolylinePoints - 2) / (kMaxPolylinePoints - 1);
    for (std::size_t i = 0; i < n; i += stride) {
        idx.push_back(i);
    }
    idx.back() = n - 1;
    return idx;
}

} // namespace

std::string svg_line_plot(const std::vector<Series>& series,
                          const std::string& x_label, const std::string& y_label)
{
    if (series.empty()) {
        throw std::invalid_argument("svg_line_plot: no series");
    }
    for (const Series& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size()) {
            throw std::invalid_argument("svg_line_plot: series '" + s.label
                                        + "' is empty or has mismatched x/y");
        }
    }

    double xmin = series[0].x[0];
    double xmax = xmin;
    double ymin = series[0].y[0];
    double ymax = ymin;
    for (const Series& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax == ymin) {
        ymin -= 1.0;
        ymax += 1.0;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto py = [&](double y) {
        return kMarginTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth)
        + "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth)
        + " " + std::to_string(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes box and ticks
    svg += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(kMarginTop)
        + "\" width=\"" + fmt("%.2f", plot_w) + "\" height=\"" + fmt("%.2f", plot_h)
        + "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        svg += "<line x1=\"" + fmt("%.2f", px(fx)) + "\" y1=\"" + fmt("%.2f", kMarginTop + plot_h)
            + "\" x2=\"" + fmt("%.2f", px(fx)) + "\" y2=\""
            + fmt("%.2f", kMarginTop + plot_h + 5.0) + "\" stroke=\"#444444\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", px(fx)) + "\" y=\""
            + fmt("%.2f", kMarginTop + plot_h + 20.0)
            + "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            + fmt("%g", fx) + "</text>\n";
        svg += "<line x1=\"" + fmt("%.2f", static_cast<double>(kMarginLeft) - 5.0) + "\" y1=\""
            + fmt("%.2f", py(fy)) + "\" x2=\"" + std::to_string(kMarginLeft) + "\" y2=\""
            + fmt("%.2f", py(fy)) + "\" stroke=\"#444444\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", static_cast<double>(kMarginLeft) - 8.0) + "\" y=\""
            + fmt("%.2f", py(fy) + 4.0)
            + "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" + fmt("%g", fy)
            + "</text>\n";
    }
    svg += "<text x=\"" + fmt("%.2f", kMarginLeft + plot_w / 2.0) + "\" y=\""
        + std::to_string(kHeight - 10)
        + "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">" + x_label
        + "</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt("%.2f", kMarginTop + plot_h / 2.0)
        + "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 16 "
        + fmt("%.2f", kMarginTop + plot_h / 2.0) + ")\">" + y_label + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        std::string points;
        for (std::size_t i : decimate(s.x.size())) {
            if (!points.empty()) {
                points += ' ';
            }
            points += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i]));
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    }

    // legend, top right
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(si);
        const double lx = kWidth - kMarginRight - 150.0;
        svg += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly - 4.0) + "\" x2=\""
            + fmt("%.2f", lx + 24.0) + "\" y2=\"" + fmt("%.2f", ly - 4.0) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", lx + 30.0) + "\" y=\"" + fmt("%.2f", ly)
            + "\" font-size=\"12\" font-family=\"sans-serif\" class=\"legend\">" + series[si].label
            + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace gridfreq
