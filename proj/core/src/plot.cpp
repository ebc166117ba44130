#include "wpcn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "wpcn/errors.hpp"

namespace wpcn {

namespace {

struct SeriesPoint {
  double x;
  double y;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void render_summary_plot(const std::string& summary_csv_path,
                         const std::string& metric,
                         const std::string& output_svg_path,
                         const std::string& objective_filter) {
  std::ifstream in(summary_csv_path);
  if (!in) {
    throw std::runtime_error("cannot open summary CSV: " + summary_csv_path);
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("summary CSV is empty: " + summary_csv_path);
  }
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"sweep_var", "sweep_value", "scheme",
                                             "objective", "metric", "mean",
                                             "stderr", "trials"};
  if (header.size() != expected.size() ||
      !std::equal(header.begin(), header.end(), expected.begin())) {
    throw ConfigError("summary CSV has an unexpected header: " + summary_csv_path);
  }

  // Series keyed by "scheme/objective", x-ordered as encountered (the
  // writer preserves sweep order).
  std::vector<std::pair<std::string, std::vector<SeriesPoint>>> series;
  std::string sweep_var = "sweep value";
  bool metric_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected.size()) {
      throw ConfigError("summary CSV row has wrong field count: " + line);
    }
    if (f[4] != metric) continue;
    metric_seen = true;
    if (!objective_filter.empty() && f[3] != objective_filter) continue;
    sweep_var = f[0];
    const std::string key = f[2] + "/" + f[3];
    const double x = std::stod(f[1]);
    const double y = std::stod(f[5]);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const auto& s) { return s.first == key; });
    if (it == series.end()) {
      series.push_back({key, {}});
      it = std::prev(series.end());
    }
    it->second.push_back({x, y});
  }
  if (!metric_seen) {
    throw ConfigError("metric not present in summary CSV: " + metric);
  }
  if (series.empty()) {
    throw ConfigError("no rows matched metric/objective filters");
  }

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& [key, pts] : series) {
    for (const auto& p : pts) {
      x_min = std::min(x_min, p.x);
      x_max = std::max(x_max, p.x);
      y_min = std::min(y_min, p.y);
      y_max = std::max(y_max, p.y);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  // A little headroom keeps lines off the frame.
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 720.0, height = 480.0;
  const double ml = 70.0, mr = 160.0, mt = 30.0, mb = 50.0;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto sx = [&](double x) { return ml + pw * (x - x_min) / (x_max - x_min); };
  const auto sy = [&](double y) { return mt + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "  <g stroke=\"#333\" stroke-width=\"1\">\n"
      << "    <line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\"/>\n"
      << "    <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\"/>\n"
      << "  </g>\n";

  // Axis labels and range ticks.
  svg << "  <text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << sweep_var << "</text>\n";
  svg << "  <text x=\"16\" y=\"" << mt + ph / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">" << metric << "</text>\n";
  svg << "  <text x=\"" << ml << "\" y=\"" << mt + ph + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x_min) << "</text>\n";
  svg << "  <text x=\"" << ml + pw << "\" y=\"" << mt + ph + 18
      << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x_max) << "</text>\n";
  svg << "  <text x=\"" << ml - 6 << "\" y=\"" << mt + ph
      << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y_min) << "</text>\n";
  svg << "  <text x=\"" << ml - 6 << "\" y=\"" << mt + 10
      << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y_max) << "</text>\n";

  int color_idx = 0;
  double legend_y = mt + 14.0;
  for (const auto& [key, pts] : series) {
    const char* color = palette[color_idx % 8];
    svg << "  <polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << fmt(sx(pts[i].x)) << ',' << fmt(sy(pts[i].y));
    }
    svg << "\"/>\n";
    svg << "  <line x1=\"" << ml + pw + 12 << "\" y1=\"" << legend_y - 4
        << "\" x2=\"" << ml + pw + 34 << "\" y2=\"" << legend_y - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << ml + pw + 40 << "\" y=\"" << legend_y
        << "\" font-size=\"11\">" << key << "</text>\n";
    legend_y += 18.0;
    ++color_idx;
  }
  svg << "</svg>\n";

  std::ofstream out(output_svg_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + output_svg_path);
  }
  out << svg.str();
  if (!out) {
    throw std::runtime_error("write failed: " + output_svg_path);
  }
}

}  // namespace wpcn
