#ifndef CVCONC_CLI_PLOT_HPP
#define CVCONC_CLI_PLOT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace cvconc::cli {

/// A numeric CSV: header row plus rows of equal width. "nan" cells parse as NaN.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of the named column, or -1.
  int find(std::string_view name) const;
};

/// Throws ConfigError on an empty table, ragged rows or non-numeric cells.
Table parse_csv(std::string_view text);

/// First column on the x axis, one polyline per remaining column. Needs >= 2 columns.
std::string line_plot_svg(const Table& table, const std::string& title);

/// Columns x, y and a third value column; every grid point is drawn as one cell.
std::string heatmap_svg(const Table& table, const std::string& title);

/// Heatmap when the header starts with x,y, line plot otherwise.
std::string plot_svg(const Table& table, const std::string& title);

}  // namespace cvconc::cli

#endif  // CVCONC_CLI_PLOT_HPP
