//
// Copyright 2026 The dpsprt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSPRT_CLI_SVG_CHART_H_
#define DPSPRT_CLI_SVG_CHART_H_

#include <string>
#include <vector>

namespace dpsprt::cli {

struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
  double lo = 0.0;  // Error bar bottom.
  double hi = 0.0;  // Error bar top.
};

struct ChartSeries {
  std::string name;
  std::vector<ChartPoint> points;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  std::vector<ChartSeries> series;
};

// Standalone SVG line chart with error bars. Points with non-positive
// coordinates on a log axis are skipped.
std::string RenderLineChart(const ChartSpec& spec);

}  // namespace dpsprt::cli

#endif  // DPSPRT_CLI_SVG_CHART_H_
