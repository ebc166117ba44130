#pragma once

#include <string>

namespace wpcn {

// Reads a sweep summary CSV (as written by write_csv), filters one
// metric (and optionally one objective), and renders a line chart as a
// standalone SVG: one polyline per (scheme, objective) series, axes with
// range labels, and a legend.  Throws ConfigError when the metric is
// absent or the CSV is malformed, std::runtime_error on I/O failure.
void render_summary_plot(const std::string& summary_csv_path,
                         const std::string& metric,
                         const std::string& output_svg_path,
                         const std::string& objective_filter = "");

}  // namespace wpcn
