#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "slope/csv_io.hpp"
#include "slope/errors.hpp"
#include "slope/experiments.hpp"

namespace slope {

namespace {

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                          "#66a61e", "#e6ab02", "#a6761d", "#666666"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (n, value)
};

struct Panel {
  double x0 = 70, y0 = 0, width = 620, height = 330;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  double sx(double x) const {
    if (xmax == xmin) return x0 + width / 2;
    return x0 + (x - xmin) / (xmax - xmin) * width;
  }
  double sy(double y) const {
    if (ymax == ymin) return y0 + height / 2;
    return y0 + height - (y - ymin) / (ymax - ymin) * height;
  }
};

void draw_panel(std::ostringstream& svg, Panel& panel, const std::string& title,
                const std::string& y_label, const std::vector<Series>& series,
                std::optional<double> reference) {
  double xmin = 1e300, xmax = -1e300, ymax = 0.0;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      if (std::isfinite(y)) ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (reference) ymax = std::max(ymax, *reference);
  panel.xmin = xmin;
  panel.xmax = xmax;
  panel.ymin = 0.0;
  panel.ymax = ymax > 0 ? 1.1 * ymax : 1.0;

  svg << "<text x=\"" << panel.x0 << "\" y=\"" << panel.y0 - 8
      << "\" font-size=\"15\" font-family=\"sans-serif\">" << title << "</text>\n";
  // Axes.
  svg << "<rect x=\"" << panel.x0 << "\" y=\"" << panel.y0 << "\" width=\"" << panel.width
      << "\" height=\"" << panel.height << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = panel.ymin + (panel.ymax - panel.ymin) * t / 4.0;
    const double ypix = panel.sy(yv);
    svg << "<line x1=\"" << panel.x0 - 4 << "\" y1=\"" << ypix << "\" x2=\"" << panel.x0
        << "\" y2=\"" << ypix << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << panel.x0 - 8 << "\" y=\"" << ypix + 4
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << format_number(std::round(yv * 1000.0) / 1000.0) << "</text>\n";
  }
  std::vector<double> xticks;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) xticks.push_back(x);
  }
  std::sort(xticks.begin(), xticks.end());
  xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
  for (double xv : xticks) {
    const double xpix = panel.sx(xv);
    svg << "<line x1=\"" << xpix << "\" y1=\"" << panel.y0 + panel.height << "\" x2=\"" << xpix
        << "\" y2=\"" << panel.y0 + panel.height + 4 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << xpix << "\" y=\"" << panel.y0 + panel.height + 16
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << format_number(xv) << "</text>\n";
  }
  svg << "<text x=\"" << panel.x0 + panel.width / 2 << "\" y=\""
      << panel.y0 + panel.height + 32
      << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">n</text>\n";
  svg << "<text x=\"18\" y=\"" << panel.y0 + panel.height / 2
      << "\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
      << panel.y0 + panel.height / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

  if (reference) {
    const double ypix = panel.sy(*reference);
    svg << "<line x1=\"" << panel.x0 << "\" y1=\"" << ypix << "\" x2=\""
        << panel.x0 + panel.width << "\" y2=\"" << ypix
        << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << panel.x0 + panel.width + 6 << "\" y=\"" << ypix + 4
        << "\" font-size=\"11\" font-family=\"sans-serif\">q=" << format_number(*reference)
        << "</text>\n";
  }

  int color_index = 0;
  double legend_y = panel.y0 + 14;
  for (const Series& s : series) {
    const char* color = kPalette[color_index % 8];
    ++color_index;
    std::ostringstream pts;
    bool open = false;
    for (auto [x, y] : s.points) {
      if (!std::isfinite(y)) continue;
      if (open) pts << ' ';
      pts << panel.sx(x) << ',' << panel.sy(y);
      open = true;
    }
    if (open) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\""
          << pts.str() << "\"/>\n";
      for (auto [x, y] : s.points) {
        if (!std::isfinite(y)) continue;
        svg << "<circle cx=\"" << panel.sx(x) << "\" cy=\"" << panel.sy(y)
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
      }
    }
    svg << "<line x1=\"" << panel.x0 + panel.width + 40 << "\" y1=\"" << legend_y - 4
        << "\" x2=\"" << panel.x0 + panel.width + 60 << "\" y2=\"" << legend_y - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << panel.x0 + panel.width + 64 << "\" y=\"" << legend_y
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    legend_y += 16;
  }
}

}  // namespace

void write_report_svg(const ExperimentReport& report, double q, const std::string& path) {
  // One series per (method, delta, alpha), x = n.
  std::map<std::string, Series> fdr_series, power_series;
  for (const CellResult& row : report.rows) {
    std::string label = to_string(row.method) + " delta=" + format_number(row.delta) +
                        " alpha=" + format_number(row.alpha);
    auto& fs = fdr_series[label];
    fs.label = label;
    fs.points.emplace_back(static_cast<double>(row.n), row.fdr);
    auto& ps = power_series[label];
    ps.label = label;
    ps.points.emplace_back(static_cast<double>(row.n), row.power);
  }
  auto finalize = [](std::map<std::string, Series>& m) {
    std::vector<Series> out;
    for (auto& [label, s] : m) {
      std::sort(s.points.begin(), s.points.end());
      out.push_back(std::move(s));
    }
    return out;
  };
  const std::vector<Series> fdr = finalize(fdr_series);
  const std::vector<Series> power = finalize(power_series);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"860\" "
         "viewBox=\"0 0 960 860\">\n<rect width=\"960\" height=\"860\" fill=\"white\"/>\n";
  Panel top;
  top.y0 = 40;
  draw_panel(svg, top, "False discovery rate", "FDR", fdr, q);
  Panel bottom;
  bottom.y0 = 480;
  draw_panel(svg, bottom, "Power", "Power", power, std::nullopt);
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << svg.str();
}

}  // namespace slope
