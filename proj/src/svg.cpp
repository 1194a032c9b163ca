// Copyright 2026 The bintemp Authors
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

#include "bintemp/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace bintemp {

namespace {

// Plot geometry in SVG user units.
constexpr double kLeft = 60;
constexpr double kTop = 40;
constexpr double kPlot = 400;      // reliability panel is kPlot x kPlot
constexpr double kGap = 40;
constexpr double kHistHeight = 100;
constexpr double kWidth = kLeft + kPlot + 20;
constexpr double kHeight = kTop + kPlot + kGap + kHistHeight + 40;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_reliability_svg(const ReliabilityReport& report,
                                   const std::string& title) {
  std::ostringstream svg;
  const double ece_value = report.total_samples > 0 ? ece(report) : 0.0;
  char ece_text[64];
  std::snprintf(ece_text, sizeof(ece_text), "ECE = %.2f%%", 100.0 * ece_value);

  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth)
      << ' ' << num(kHeight) << "\">\n";
  svg << "  <title>" << escape(title.empty() ? "Reliability diagram" : title)
      << "</title>\n";
  svg << "  <text x=\"" << num(kLeft) << "\" y=\"" << num(kTop - 15)
      << "\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(title.empty() ? std::string(ece_text)
                              : title + " (" + ece_text + ")")
      << "</text>\n";

  // Reliability panel: frame, identity diagonal, accuracy bars.
  const double x0 = kLeft;
  const double y0 = kTop + kPlot;  // y of accuracy 0
  svg << "  <g id=\"reliability\">\n";
  svg << "    <rect class=\"frame\" x=\"" << num(x0) << "\" y=\"" << num(kTop)
      << "\" width=\"" << num(kPlot) << "\" height=\"" << num(kPlot)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (const auto& bin : report.bins) {
    if (bin.count == 0) continue;
    const double bx = x0 + bin.lower * kPlot;
    const double bw = (bin.upper - bin.lower) * kPlot;
    const double bh = *bin.accuracy * kPlot;
    svg << "    <rect class=\"acc-bar\" x=\"" << num(bx) << "\" y=\""
        << num(y0 - bh) << "\" width=\"" << num(bw) << "\" height=\""
        << num(bh) << "\" fill=\"#3b6fb6\" stroke=\"#1d3a63\""
        << " data-count=\"" << bin.count << "\"/>\n";
    const double cy = y0 - *bin.avg_confidence * kPlot;
    svg << "    <line class=\"conf-mark\" x1=\"" << num(bx) << "\" y1=\""
        << num(cy) << "\" x2=\"" << num(bx + bw) << "\" y2=\"" << num(cy)
        << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  }
  svg << "    <line class=\"diagonal\" x1=\"" << num(x0) << "\" y1=\""
      << num(y0) << "\" x2=\"" << num(x0 + kPlot) << "\" y2=\"" << num(kTop)
      << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
  svg << "    <text x=\"" << num(x0 - 45) << "\" y=\"" << num(kTop + kPlot / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\">Accuracy</text>\n";
  svg << "  </g>\n";

  // Sample-count histogram.
  const double hy0 = kTop + kPlot + kGap + kHistHeight;
  std::size_t max_count = 1;
  for (const auto& bin : report.bins) max_count = std::max(max_count, bin.count);
  svg << "  <g id=\"histogram\">\n";
  for (const auto& bin : report.bins) {
    if (bin.count == 0) continue;
    const double bh = kHistHeight * static_cast<double>(bin.count) /
                      static_cast<double>(max_count);
    svg << "    <rect class=\"hist-bar\" x=\"" << num(x0 + bin.lower * kPlot)
        << "\" y=\"" << num(hy0 - bh) << "\" width=\""
        << num((bin.upper - bin.lower) * kPlot) << "\" height=\"" << num(bh)
        << "\" fill=\"#999\"/>\n";
  }
  svg << "    <line x1=\"" << num(x0) << "\" y1=\"" << num(hy0) << "\" x2=\""
      << num(x0 + kPlot) << "\" y2=\"" << num(hy0) << "\" stroke=\"#444\"/>\n";
  svg << "    <text x=\"" << num(x0 + kPlot / 2 - 30) << "\" y=\""
      << num(hy0 + 25)
      << "\" font-family=\"sans-serif\" font-size=\"12\">Confidence</text>\n";
  svg << "  </g>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bintemp
