#include "kmzi/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "kmzi/cli/config.hpp"

namespace kmzi::cli {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 160, kTop = 30, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
const char* const kRefColumns[] = {"sql", "hl", "sub_hl", "shl"};
const char* const kRefDash[] = {"8,4", "4,4", "2,3", "10,3,2,3"};

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> pts;
  bool reference = false;
  int style = 0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string render_svg(const CsvTable& table, const PlotOptions& opts) {
  const std::size_t cx = table.column(opts.x), cy = table.column(opts.y);
  const std::size_t ck = table.column("k"), cm = table.column("m"), cn = table.column("n");
  std::vector<std::pair<std::size_t, int>> refs;
  if (opts.reference_lines) {
    for (int i = 0; i < 4; ++i) {
      if (table.has_column(kRefColumns[i])) refs.emplace_back(table.column(kRefColumns[i]), i);
    }
  }
  auto usable = [&](std::optional<double> v) {
    return v && std::isfinite(*v) && (!opts.log_y || *v > 0.0);
  };

  std::vector<Curve> curves;
  std::map<std::string, std::size_t> series_index;
  for (const auto& row : table.rows) {
    const std::string key = "m=" + row[cm] + " n=" + row[cn] + " k=" + row[ck];
    auto it = series_index.find(key);
    if (it == series_index.end()) {
      it = series_index.emplace(key, curves.size()).first;
      curves.push_back({key, {}, false, 0});
      for (const auto& [col, style] : refs) {
        curves.push_back({std::string(kRefColumns[style]) + " (" + key + ")", {}, true, style});
      }
    }
    const auto x = parse_cell(row[cx]);
    if (!x || !std::isfinite(*x)) continue;
    const auto y = parse_cell(row[cy]);
    if (usable(y)) curves[it->second].pts.emplace_back(*x, *y);
    for (std::size_t j = 0; j < refs.size(); ++j) {
      const auto v = parse_cell(row[refs[j].first]);
      if (usable(v)) curves[it->second + 1 + j].pts.emplace_back(*x, *v);
    }
  }
  curves.erase(std::remove_if(curves.begin(), curves.end(),
                              [](const Curve& c) { return c.reference && c.pts.empty(); }),
               curves.end());
  const bool any = std::any_of(curves.begin(), curves.end(),
                               [](const Curve& c) { return !c.reference && !c.pts.empty(); });
  if (!any) throw MalformedInput("column '" + opts.y + "' holds no plottable values");

  auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };
  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const auto& c : curves) {
    for (const auto& [x, y] : c.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  }
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">" << opts.x << "</text>\n";
  os << "<text x=\"15\" y=\"" << num(kTop + ph / 2) << "\" transform=\"rotate(-90 15 "
     << num(kTop + ph / 2) << ")\" text-anchor=\"middle\">" << opts.y
     << (opts.log_y ? " (log10)" : "") << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + (1.0 - i / 4.0) * ph + 4)
       << "\" text-anchor=\"end\">" << tick(opts.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }

  int series_no = 0, legend_row = 0;
  std::string color = kPalette[0];
  for (const auto& c : curves) {
    if (!c.reference) color = kPalette[series_no++ % 8];
    if (c.pts.empty()) continue;
    os << "<polyline class=\"" << (c.reference ? "reference" : "series") << "\" fill=\"none\" stroke=\""
       << (c.reference ? "#555555" : color) << "\" stroke-width=\"" << (c.reference ? 1 : 2)
       << "\"";
    if (c.reference) os << " stroke-dasharray=\"" << kRefDash[c.style] << "\"";
    os << " points=\"";
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
      os << (i ? " " : "") << num(sx(c.pts[i].first)) << "," << num(sy(c.pts[i].second));
    }
    os << "\"><title>" << c.label << "</title></polyline>\n";
    os << "<text x=\"" << num(kWidth - kRight + 10) << "\" y=\"" << kTop + 14 * legend_row++
       << "\" fill=\"" << (c.reference ? "#555555" : color) << "\">" << c.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const std::string& csv_path, const std::string& svg_path, const PlotOptions& opts) {
  const CsvTable t = read_csv(csv_path);
  const std::string svg = render_svg(t, opts);
  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + svg_path);
  out << svg;
  if (!out) throw IoError("write to " + svg_path + " failed");
}

}  // namespace kmzi::cli
