#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gridfreq {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Polylines are decimated to at most this many points (endpoints kept).
constexpr std::size_t kMaxPolylinePoints = 2000;

/// Self-contained line plot: linear axes, one polyline per series, legend from
/// the series labels. Throws std::invalid_argument on empty input.
std::string svg_line_plot(const std::vector<Series>& series,
                          const std::string& x_label, const std::string& y_label);

} // namespace gridfreq
