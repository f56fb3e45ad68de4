// Copyright 2026 The fresure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fresure {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool markers = false;
};

struct HorizontalLine {
  std::string label;
  double y = 0.0;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<HorizontalLine> hlines;  // drawn dotted
  bool log_x = false;
  bool log_y = false;
  std::optional<std::pair<double, double>> x_range;
  int width = 800;
  int height = 500;
};

/// Static polyline rendering with axes, ticks and a legend.
std::string render_svg(const Plot& plot);

/// Throws IoError with the path when the file cannot be written.
void write_svg(const std::filesystem::path& path, const Plot& plot);

}  // namespace fresure
