#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nsmcli {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Render a self-contained SVG line plot. Points that cannot be placed on
/// the requested scale (non-positive on a log axis, NaN) break the line.
void write_svg(const std::string& path, const PlotSpec& spec);

/**
 * Emit a gnuplot script that rebuilds the same figure from a CSV produced
 * by CsvWriter. `y_columns` pairs a 1-based column index with its legend
 * label; `x_column` is 1-based as well.
 */
void write_gnuplot_script(const std::string& path, const std::string& csv_file,
                          const PlotSpec& spec, int x_column,
                          const std::vector<std::pair<int, std::string>>& y_columns);

}  // namespace nsmcli
