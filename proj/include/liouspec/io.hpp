// io.hpp: CSV and SVG emitters shared by the CLI.
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace liouspec::io {

// Round-trip precision, locale independent.
std::string fmt(double x);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

struct Marker {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

struct HeatMap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> xs;
    std::vector<double> ys;
    // values[i * ys.size() + j] at (xs[i], ys[j]); NaN cells are drawn masked.
    std::vector<double> values;
    bool diverging = false; // symmetric color scale around zero
    std::vector<std::pair<std::vector<std::pair<double, double>>, std::string>> polylines; // (points, css color)
    std::vector<Marker> markers;
};

void write_heatmap_svg(const std::filesystem::path& path, const HeatMap& map);

struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;
    std::vector<std::pair<double, std::string>> x_markers; // vertical ticks on the axis
};

void write_lineplot_svg(const std::filesystem::path& path, const LinePlot& plot);

} // namespace liouspec::io
