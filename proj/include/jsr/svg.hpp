#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jsr {

/// One named line on a chart; y.size() must match the shared x axis.
struct SvgSeries {
    std::string name;
    std::vector<double> y;
};

/// Standalone SVG line chart (one polyline + markers per series, legend,
/// axes). Y axis spans [0, max(1, data max)] so rate charts read naturally.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<double>& x,
                           const std::vector<SvgSeries>& series);

/// Standalone SVG bar chart over integer-keyed bins (histogram rendering).
std::string svg_bar_chart(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::map<int, int>& bins);

/// Standalone SVG heatmap; values are row-major over (rows = ys, cols = xs)
/// in [0, 1]; masked cells are drawn gray. Used for phase-transition maps.
std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<int>& xs,
                        const std::vector<int>& ys, const std::vector<double>& values,
                        const std::vector<bool>& masked);

}  // namespace jsr
