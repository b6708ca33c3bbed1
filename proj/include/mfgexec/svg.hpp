#pragma once

#include <string>
#include <vector>

#include "mfgexec/csv.hpp"

namespace mfgexec {

/// Static chart rendering with no plotting dependencies: fixed 960x540 canvas,
/// byte-identical output for identical inputs.

struct LinePlotSpec {
    std::string title;
    std::string x_column;
    std::vector<std::string> y_columns;
};

struct HeatmapSpec {
    std::string title;
    std::string x_column;      ///< cell x coordinate (e.g. t)
    std::string y_column;      ///< cell y coordinate (e.g. ratio)
    std::string value_column;  ///< cell intensity
};

/// Multi-series line chart. Throws std::invalid_argument on unknown columns;
/// an empty table yields a valid SVG with axes and a "no data" annotation.
std::string render_line_chart(const CsvTable& table, const LinePlotSpec& spec);

/// Grid heatmap over the distinct (x, y) values present in the table.
std::string render_heatmap(const CsvTable& table, const HeatmapSpec& spec);

}  // namespace mfgexec
