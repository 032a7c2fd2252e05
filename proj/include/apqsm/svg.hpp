// SPDX-License-Identifier: Apache-2.0
//
// apqsm — link-level simulation and power-allocation optimization for
// superposed-PAM spatial modulation in indoor visible-light MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace apqsm {

/// One polyline of a log-y plot. Non-positive y values are skipped (they
/// have no position on the log axis).
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> xy;
    bool dashed = false;
};

/// Minimal SER-style plot: linear x, log10 y, one polyline per series and a
/// text legend. Purely a convenience view of the CSV data.
inline void write_line_plot_svg(const std::string& path, const std::string& title,
                                const std::string& x_label, const std::vector<PlotSeries>& series)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const double width = 760, height = 520;
    const double ml = 70, mr = 20, mt = 40, mb = 55;

    double xmin = 0, xmax = 1, ymin_log = -6, ymax_log = 0;
    bool have = false;
    for (const PlotSeries& s : series)
        for (auto [x, y] : s.xy) {
            if (!(y > 0.0)) continue;
            const double ly = std::log10(std::min(y, 1.0));
            if (!have) {
                xmin = xmax = x;
                ymin_log = ymax_log = ly;
                have = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin_log = std::min(ymin_log, ly);
                ymax_log = std::max(ymax_log, ly);
            }
        }
    if (!have) {
        xmin = 0;
        xmax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    ymin_log = std::floor(std::max(ymin_log, -12.0));
    ymax_log = std::ceil(std::min(ymax_log + 0.05, 0.0));
    if (ymax_log <= ymin_log) ymax_log = ymin_log + 1;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double ly) { return height - mb - (ly - ymin_log) / (ymax_log - ymin_log) * (height - mt - mb); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
        << "</text>\n";

    // frame and grid
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr << "\" height=\""
        << height - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(ymin_log); d <= static_cast<int>(ymax_log); ++d) {
        const double y = py(d);
        out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e"
            << d << "</text>\n";
    }
    const int n_xticks = 8;
    for (int i = 0; i <= n_xticks; ++i) {
        const double x = xmin + (xmax - xmin) * i / n_xticks;
        out << "<line x1=\"" << px(x) << "\" y1=\"" << height - mb << "\" x2=\"" << px(x) << "\" y2=\""
            << height - mb + 5 << "\" stroke=\"black\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", x);
        out << "<text x=\"" << px(x) << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
    }
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << x_label << "</text>\n";

    // series
    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = colors[si % (sizeof(colors) / sizeof(colors[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
        if (s.dashed) out << " stroke-dasharray=\"6,4\"";
        out << " points=\"";
        for (auto [x, y] : s.xy) {
            if (!(y > 0.0)) continue;
            out << px(x) << ',' << py(std::log10(std::min(y, 1.0))) << ' ';
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 16 * static_cast<double>(si);
        out << "<line x1=\"" << ml + 8 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 36 << "\" y2=\"" << ly - 4
            << "\" stroke=\"" << color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        out << "<text x=\"" << ml + 42 << "\" y=\"" << ly << "\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace apqsm
