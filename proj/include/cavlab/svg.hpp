// svg.hpp - Static line plots and heatmaps
//
// Output is a pure function of the input: fixed 800x600 canvas, fixed fonts,
// fixed number formatting and no timestamps, so identical data gives
// byte-identical documents.

#pragma once

#include "cavlab/dynamics.hpp"
#include "cavlab/sweep.hpp"

#include <string>
#include <vector>

namespace cavlab {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y; // NaN points break the line
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x; // column coordinates
    std::vector<double> y; // row coordinates
    // z[i * y.size() + j] at (x[i], y[j]); NaN cells are drawn gray
    std::vector<double> z;
};

// Throws EmptyData when there is nothing finite to draw, NonFiniteAxis when
// an x coordinate is not finite.
std::string render_line_plot(const LinePlot& plot);
// Throws EmptyData, NonFiniteAxis, or InvalidSpec when z does not match x * y.
std::string render_heatmap(const Heatmap& map);

// E_a and E_c against J t.
LinePlot trajectory_plot(const Trajectory& traj, std::string title = {});
// One-axis tables become a line plot, two-axis tables a heatmap.
std::string render_table(const SweepTable& table, std::string title = {});
// Overlays several one-axis tables sharing the same axis.
LinePlot tables_plot(const std::vector<SweepTable>& tables, const std::vector<std::string>& labels,
                     std::string title = {});

} // namespace cavlab
