#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace navrl {

/// Centered moving average; the window is truncated at the series ends.
/// Windows of even width reach one sample further forward than back.
std::vector<double> centered_moving_average(const std::vector<double>& values, int window);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Plot-area geometry shared by rendering and by anything decoding a chart.
struct ChartFrame {
  double width = 860.0;
  double height = 480.0;
  double margin_left = 80.0;
  double margin_right = 180.0;
  double margin_top = 30.0;
  double margin_bottom = 50.0;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double map_x(double x) const;
  double map_y(double y) const;
  double unmap_y(double py) const;
};

/// Data bounds padded so degenerate (constant) ranges still have extent.
ChartFrame frame_for(const std::vector<ChartSeries>& series);

std::string render_line_chart(const std::vector<ChartSeries>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label);

/// Reads each metrics CSV, smooths total_reward, writes one polyline per file.
void emit_reward_graph(const std::vector<std::filesystem::path>& metrics_paths,
                       const std::filesystem::path& out_path, int smoothing_window);

}  // namespace navrl
