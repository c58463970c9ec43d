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

#include "dpsprt/cli/svg_chart.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"

namespace dpsprt::cli {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 50;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#e377c2", "#17becf"};

std::string Escape(const std::string& text) {
  return absl::StrReplaceAll(
      text, {{"&", "&amp;"}, {"<", "&lt;"}, {">", "&gt;"}, {"\"", "&quot;"}});
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  double T(double v) const { return log ? std::log10(v) : v; }
  bool Usable(double v) const { return std::isfinite(v) && (!log || v > 0); }
  // Maps v into [0, 1].
  double Unit(double v) const { return (T(v) - T(lo)) / (T(hi) - T(lo)); }

  std::vector<double> Ticks() const {
    std::vector<double> ticks;
    if (log) {
      for (double d = std::floor(std::log10(lo));
           d <= std::ceil(std::log10(hi)); d += 1.0) {
        const double t = std::pow(10.0, d);
        if (t >= lo * (1 - 1e-9) && t <= hi * (1 + 1e-9)) ticks.push_back(t);
      }
    } else {
      const double step = (hi - lo) / 5.0;
      for (int i = 0; i <= 5; ++i) ticks.push_back(lo + i * step);
    }
    return ticks;
  }
};

Axis FitAxis(bool log, double lo, double hi) {
  Axis axis{.log = log, .lo = lo, .hi = hi};
  if (!(lo < hi)) {
    axis.lo = log ? lo / 2.0 : lo - 1.0;
    axis.hi = log ? hi * 2.0 : hi + 1.0;
  }
  if (log) {
    axis.lo = std::pow(10.0, std::floor(std::log10(axis.lo)));
    axis.hi = std::pow(10.0, std::ceil(std::log10(axis.hi)));
  }
  return axis;
}

}  // namespace

std::string RenderLineChart(const ChartSpec& spec) {
  const double inf = std::numeric_limits<double>::infinity();
  double x_lo = inf, x_hi = -inf, y_lo = inf, y_hi = -inf;
  const Axis probe_x{.log = spec.log_x};
  const Axis probe_y{.log = spec.log_y};
  for (const ChartSeries& s : spec.series) {
    for (const ChartPoint& p : s.points) {
      if (!probe_x.Usable(p.x) || !probe_y.Usable(p.y)) continue;
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      for (const double y : {p.y, p.lo, p.hi}) {
        if (!probe_y.Usable(y)) continue;
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (!std::isfinite(x_lo)) x_lo = x_hi = y_lo = y_hi = 1.0;
  const Axis xa = FitAxis(spec.log_x, x_lo, x_hi);
  const Axis ya = FitAxis(spec.log_y, y_lo, y_hi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + xa.Unit(x) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - ya.Unit(y)) * ph; };

  std::string svg = absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
      static_cast<int>(kWidth), static_cast<int>(kHeight));
  absl::StrAppendFormat(
      &svg,
      "<text x=\"%g\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">%s"
      "</text>\n",
      kLeft + pw / 2, Escape(spec.title));
  absl::StrAppendFormat(&svg,
                        "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                        "fill=\"none\" stroke=\"black\"/>\n",
                        kLeft, kTop, pw, ph);
  for (const double t : xa.Ticks()) {
    absl::StrAppendFormat(
        &svg,
        "<line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" stroke=\"#ddd\"/>\n"
        "<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%g</text>\n",
        px(t), kTop, px(t), kTop + ph, px(t), kTop + ph + 18, t);
  }
  for (const double t : ya.Ticks()) {
    absl::StrAppendFormat(
        &svg,
        "<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"#ddd\"/>\n"
        "<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">%g</text>\n",
        kLeft, py(t), kLeft + pw, py(t), kLeft - 6, py(t) + 4, t);
  }
  absl::StrAppendFormat(
      &svg,
      "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n"
      "<text transform=\"translate(20 %g) rotate(-90)\" "
      "text-anchor=\"middle\">%s</text>\n",
      kLeft + pw / 2, kHeight - 15, Escape(spec.x_label), kTop + ph / 2,
      Escape(spec.y_label));

  for (size_t i = 0; i < spec.series.size(); ++i) {
    const ChartSeries& s = spec.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string path;
    for (const ChartPoint& p : s.points) {
      if (!xa.Usable(p.x) || !ya.Usable(p.y)) continue;
      absl::StrAppendFormat(&path, "%s%.2f,%.2f ", path.empty() ? "M" : "L",
                            px(p.x), py(p.y));
      if (ya.Usable(p.lo) && ya.Usable(p.hi)) {
        absl::StrAppendFormat(
            &svg,
            "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
            "stroke=\"%s\"/>\n",
            px(p.x), py(p.lo), px(p.x), py(p.hi), color);
      }
      absl::StrAppendFormat(
          &svg, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
          px(p.x), py(p.y), color);
    }
    if (!path.empty()) {
      absl::StrAppendFormat(
          &svg, "<path d=\"%s\" fill=\"none\" stroke=\"%s\"/>\n", path, color);
    }
    const double ly = kTop + 10 + 20 * static_cast<double>(i);
    absl::StrAppendFormat(
        &svg,
        "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" "
        "stroke-width=\"2\"/>\n<text x=\"%g\" y=\"%g\">%s</text>\n",
        kLeft + pw + 12, ly, kLeft + pw + 32, ly, color, kLeft + pw + 38,
        ly + 4, Escape(s.name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace dpsprt::cli
