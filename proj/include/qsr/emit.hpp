#pragma once

#include <string>
#include <vector>

namespace qsr {

std::string format_double(double v);

// Write-temp-then-rename so concurrent readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string csv() const;
};

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<Series> series;
};

std::string svg_plot(const PlotSpec& spec);

}  // namespace qsr
