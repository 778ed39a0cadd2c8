#pragma once

#include <string>
#include <vector>

namespace codesign {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal SVG line chart with axes, tick labels and a legend. Non-finite points are skipped.
void writeSvgLineChart(const std::string& path, const std::string& title, const std::string& xLabel,
                       const std::string& yLabel, const std::vector<Series>& series);

} // namespace codesign
