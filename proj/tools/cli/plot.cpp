#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "config.hpp"

namespace cvconc::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const std::array<const char*, 6> kLineColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  double span() const { return hi > lo ? hi - lo : 1.0; }
  double unit(double v) const { return (v - lo) / span(); }
};

std::string short_number(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& s, const std::string& title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title) << "</text>\n";
}

void axes(std::ostringstream& s, const Range& x, const Range& y, const std::string& x_label,
          const std::string& y_label) {
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\""
    << kPlotH << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double base = kTop + kPlotH;
  s << "<text x=\"" << kLeft << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">"
    << short_number(x.lo) << "</text>\n"
    << "<text x=\"" << kLeft + kPlotW << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">"
    << short_number(x.hi) << "</text>\n"
    << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << base + 36
    << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
    << "<text x=\"" << kLeft - 6 << "\" y=\"" << base << "\" text-anchor=\"end\">"
    << short_number(y.lo) << "</text>\n"
    << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
    << short_number(y.hi) << "</text>\n"
    << "<text transform=\"translate(18," << kTop + kPlotH / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

// Linear blend through a dark-blue to yellow ramp.
std::string ramp_color(double t) {
  static const std::array<std::array<double, 3>, 5> stops = {{{68, 1, 84},
                                                              {59, 82, 139},
                                                              {33, 145, 140},
                                                              {94, 201, 98},
                                                              {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - i;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] * (1 - f) + stops[i + 1][c] * f));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace

int Table::find(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Table parse_csv(std::string_view text) {
  Table table;
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(table.header.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::logic_error&) {
        throw ConfigError("non-numeric CSV cell '" + c + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty() || table.rows.empty()) throw ConfigError("CSV has no data rows");
  return table;
}

std::string line_plot_svg(const Table& table, const std::string& title) {
  if (table.header.size() < 2) throw ConfigError("a line plot needs an x column and a series");
  Range x, y;
  for (const auto& row : table.rows) {
    x.add(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) y.add(row[c]);
  }
  if (!x.valid() || !y.valid()) throw ConfigError("CSV has no finite values to plot");

  std::ostringstream s;
  open_svg(s, title);
  axes(s, x, y, table.header[0], table.header.size() == 2 ? table.header[1] : "");
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const char* color = kLineColors[(c - 1) % kLineColors.size()];
    // NaN cells break the polyline into separate segments.
    std::vector<std::string> segments(1);
    for (const auto& row : table.rows) {
      if (!std::isfinite(row[0]) || !std::isfinite(row[c])) {
        if (!segments.back().empty()) segments.emplace_back();
        continue;
      }
      const double px = kLeft + x.unit(row[0]) * kPlotW;
      const double py = kTop + (1.0 - y.unit(row[c])) * kPlotH;
      segments.back() += short_number(px) + "," + short_number(py) + " ";
    }
    for (const auto& pts : segments) {
      if (pts.empty()) continue;
      s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << pts << "\"/>\n";
    }
    const double ly = kTop + 14 + 18 * (c - 1);
    s << "<line x1=\"" << kLeft + kPlotW + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
      << kLeft + kPlotW + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << kLeft + kPlotW + 36 << "\" y=\"" << ly << "\">"
      << escape(table.header[c]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string heatmap_svg(const Table& table, const std::string& title) {
  if (table.header.size() < 3 || table.header[0] != "x" || table.header[1] != "y") {
    throw ConfigError("a heatmap needs columns x, y and a value column");
  }
  std::set<double> xs, ys;
  Range v;
  for (const auto& row : table.rows) {
    xs.insert(row[0]);
    ys.insert(row[1]);
    v.add(row[2]);
  }
  if (!v.valid()) throw ConfigError("CSV has no finite values to plot");
  const Range x{*xs.begin(), *xs.rbegin()};
  const Range y{*ys.begin(), *ys.rbegin()};
  const double cw = kPlotW / static_cast<double>(xs.size());
  const double ch = kPlotH / static_cast<double>(ys.size());

  std::ostringstream s;
  open_svg(s, title);
  s << "<g shape-rendering=\"crispEdges\">\n";
  for (const auto& row : table.rows) {
    const double ix = static_cast<double>(std::distance(xs.begin(), xs.find(row[0])));
    const double iy = static_cast<double>(std::distance(ys.begin(), ys.find(row[1])));
    const std::string fill = std::isfinite(row[2]) ? ramp_color(v.unit(row[2])) : "#cccccc";
    s << "<rect x=\"" << short_number(kLeft + ix * cw) << "\" y=\""
      << short_number(kTop + kPlotH - (iy + 1) * ch) << "\" width=\"" << short_number(cw)
      << "\" height=\"" << short_number(ch) << "\" fill=\"" << fill << "\"/>\n";
  }
  s << "</g>\n";
  axes(s, x, y, "x", "y");
  // Colour bar.
  const double bx = kLeft + kPlotW + 20;
  for (int i = 0; i < 50; ++i) {
    s << "<rect x=\"" << bx << "\" y=\"" << short_number(kTop + kPlotH * (49 - i) / 50.0)
      << "\" width=\"16\" height=\"" << short_number(kPlotH / 50.0 + 0.5) << "\" fill=\""
      << ramp_color(i / 49.0) << "\"/>\n";
  }
  s << "<text x=\"" << bx + 22 << "\" y=\"" << kTop + 10 << "\">" << short_number(v.hi)
    << "</text>\n<text x=\"" << bx + 22 << "\" y=\"" << kTop + kPlotH << "\">"
    << short_number(v.lo) << "</text>\n<text x=\"" << bx << "\" y=\"" << kTop - 8 << "\">"
    << escape(table.header[2]) << "</text>\n</svg>\n";
  return s.str();
}

std::string plot_svg(const Table& table, const std::string& title) {
  if (table.header.size() >= 3 && table.header[0] == "x" && table.header[1] == "y") {
    return heatmap_svg(table, title);
  }
  return line_plot_svg(table, title);
}

}  // namespace cvconc::cli
