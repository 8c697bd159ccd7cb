#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace bfexact::tools {

/// Minimal static line chart: one polyline per series over a shared x axis,
/// plus an optional horizontal reference rule.
struct LineChart {
    std::string title;
    std::vector<double> x;
    std::map<std::string, std::vector<double>> series;
    double ref_line = -1.0;  // drawn when >= 0
};

inline void write_svg(std::ostream& os, const LineChart& chart) {
    const int w = 720, h = 480, ml = 60, mr = 150, mt = 40, mb = 40;
    const int pw = w - ml - mr, ph = h - mt - mb;
    const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};

    double xmin = chart.x.front(), xmax = chart.x.back();
    double ymin = 0.0, ymax = 0.0;
    for (const auto& [name, ys] : chart.series)
        for (double v : ys) ymax = std::max(ymax, v);
    if (chart.ref_line >= 0.0) ymax = std::max(ymax, chart.ref_line);
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.1;

    auto px = [&](double v) { return ml + pw * (v - xmin) / (xmax - xmin); };
    auto py = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << chart.title << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
       << mt + ph << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double v = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << v << "</text>\n";
    }
    if (chart.ref_line >= 0.0) {
        os << "<line x1=\"" << ml << "\" y1=\"" << py(chart.ref_line) << "\" x2=\"" << ml + pw
           << "\" y2=\"" << py(chart.ref_line)
           << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
    }
    int idx = 0;
    for (const auto& [name, ys] : chart.series) {
        const char* color = palette[idx % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ys.size(); ++i) os << px(chart.x[i]) << ',' << py(ys[i]) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << ml + pw + 10 << "\" y=\"" << mt + 16 * (idx + 1)
           << "\" font-size=\"12\" fill=\"" << color << "\">" << name << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
}

}  // namespace bfexact::tools
