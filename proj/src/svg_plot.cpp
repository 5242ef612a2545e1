#include "navrl/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "navrl/error.hpp"
#include "navrl/harness.hpp"

namespace navrl {

namespace fs = std::filesystem;

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1-2-5 tick spacing giving roughly `target` intervals.
double tick_step(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::vector<double> ticks(double lo, double hi, int target) {
  const double step = tick_step(lo, hi, target);
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

}  // namespace

std::vector<double> centered_moving_average(const std::vector<double>& values, int window) {
  if (window < 1) throw Error(ErrorCode::InvalidInput, "smoothing window must be >= 1");
  const auto n = static_cast<long>(values.size());
  const long back = (window - 1) / 2;
  const long ahead = window / 2;
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (long i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];
  std::vector<double> out(values.size());
  for (long i = 0; i < n; ++i) {
    if (window == 1) {
      out[i] = values[i];
      continue;
    }
    const long lo = std::max(0L, i - back);
    const long hi = std::min(n - 1, i + ahead);
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double ChartFrame::map_x(double x) const {
  const double w = width - margin_left - margin_right;
  return margin_left + (x - x_min) / (x_max - x_min) * w;
}

double ChartFrame::map_y(double y) const {
  const double h = height - margin_top - margin_bottom;
  return margin_top + (y_max - y) / (y_max - y_min) * h;
}

double ChartFrame::unmap_y(double py) const {
  const double h = height - margin_top - margin_bottom;
  return y_max - (py - margin_top) / h * (y_max - y_min);
}

ChartFrame frame_for(const std::vector<ChartSeries>& series) {
  ChartFrame f;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (double x : s.x) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
    }
    for (double y : s.y) {
      if (!std::isfinite(y)) continue;
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (!std::isfinite(xlo)) xlo = 0.0, xhi = 1.0;
  if (!std::isfinite(ylo)) ylo = 0.0, yhi = 1.0;
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) {
    const double pad = std::max(1.0, std::abs(ylo) * 0.05);
    ylo -= pad;
    yhi += pad;
  } else {
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
  }
  f.x_min = xlo;
  f.x_max = xhi;
  f.y_min = ylo;
  f.y_max = yhi;
  return f;
}

std::string render_line_chart(const std::vector<ChartSeries>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label) {
  const ChartFrame f = frame_for(series);
  const double plot_right = f.width - f.margin_right;
  const double plot_bottom = f.height - f.margin_bottom;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", f.width) + "\" height=\"" +
         fmt("%.0f", f.height) + "\" viewBox=\"0 0 " + fmt("%.0f", f.width) + " " + fmt("%.0f", f.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt("%.1f", f.width / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";

  svg += "<g class=\"axes\" stroke=\"#444\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + fmt("%.1f", f.margin_left) + "\" y1=\"" + fmt("%.1f", plot_bottom) + "\" x2=\"" +
         fmt("%.1f", plot_right) + "\" y2=\"" + fmt("%.1f", plot_bottom) + "\"/>\n";
  svg += "<line x1=\"" + fmt("%.1f", f.margin_left) + "\" y1=\"" + fmt("%.1f", f.margin_top) + "\" x2=\"" +
         fmt("%.1f", f.margin_left) + "\" y2=\"" + fmt("%.1f", plot_bottom) + "\"/>\n";
  svg += "</g>\n<g class=\"ticks\" fill=\"#222\">\n";
  for (double t : ticks(f.x_min, f.x_max, 8)) {
    const double px = f.map_x(t);
    svg += "<line x1=\"" + fmt("%.1f", px) + "\" y1=\"" + fmt("%.1f", plot_bottom) + "\" x2=\"" + fmt("%.1f", px) +
           "\" y2=\"" + fmt("%.1f", plot_bottom + 5) + "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", px) + "\" y=\"" + fmt("%.1f", plot_bottom + 18) +
           "\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
  }
  for (double t : ticks(f.y_min, f.y_max, 6)) {
    const double py = f.map_y(t);
    svg += "<line x1=\"" + fmt("%.1f", f.margin_left - 5) + "\" y1=\"" + fmt("%.1f", py) + "\" x2=\"" +
           fmt("%.1f", plot_right) + "\" y2=\"" + fmt("%.1f", py) + "\" stroke=\"#ddd\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", f.margin_left - 8) + "\" y=\"" + fmt("%.1f", py + 4) +
           "\" text-anchor=\"end\">" + fmt("%g", t) + "</text>\n";
  }
  svg += "</g>\n";
  svg += "<text x=\"" + fmt("%.1f", (f.margin_left + plot_right) / 2) + "\" y=\"" + fmt("%.1f", f.height - 10) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  svg += "<text transform=\"translate(16," + fmt("%.1f", (f.margin_top + plot_bottom) / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
      if (!std::isfinite(s.y[j])) continue;
      svg += (j ? " " : "") + fmt("%.3f", f.map_x(s.x[j])) + "," + fmt("%.3f", f.map_y(s.y[j]));
    }
    svg += "\"/>\n";
    const double ly = f.margin_top + 10 + 18.0 * static_cast<double>(i);
    svg += "<line x1=\"" + fmt("%.1f", plot_right + 12) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" +
           fmt("%.1f", plot_right + 32) + "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"3\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", plot_right + 38) + "\" y=\"" + fmt("%.1f", ly + 4) + "\">" +
           escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_reward_graph(const std::vector<fs::path>& metrics_paths, const fs::path& out_path,
                       int smoothing_window) {
  if (smoothing_window < 1) throw Error(ErrorCode::InvalidInput, "smoothing window must be >= 1");
  if (metrics_paths.empty()) throw Error(ErrorCode::EmptyInput, "no metrics files given");

  std::multiset<std::string> stems;
  for (const auto& p : metrics_paths) stems.insert(p.stem().string());

  std::vector<ChartSeries> series;
  for (const auto& path : metrics_paths) {
    const auto records = read_metrics_csv(path);
    ChartSeries s;
    s.label = path.stem().string();
    // Identical stems (every run writes metrics.csv) are told apart by directory.
    if (stems.count(s.label) > 1 && path.has_parent_path()) {
      s.label = path.parent_path().filename().string() + "/" + s.label;
    }
    std::vector<double> raw;
    for (const auto& r : records) {
      s.x.push_back(r.episode);
      raw.push_back(r.total_reward);
    }
    s.y = centered_moving_average(raw, smoothing_window);
    series.push_back(std::move(s));
  }
  const std::string svg =
      render_line_chart(series, "Episode reward (centered moving average, window " +
                                    std::to_string(smoothing_window) + ")",
                        "episode", "total reward");
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path.string());
  out << svg;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + out_path.string());
}

}  // namespace navrl
