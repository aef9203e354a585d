#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "xbarsim/common.hpp"

namespace xbarsim {
namespace svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points; // (x, y)
};

namespace detail {

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f6fb4", "#d1342b", "#2e9e4f", "#8a52a8",
                                   "#c88a1f", "#3fa8a0"};
    return colors[i % 6];
}

inline std::string text(double x, double y, const std::string& s,
                        const char* anchor = "start") {
    return "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-size=\"12\" " +
           "font-family=\"monospace\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

} // namespace detail

/// Multi-series polyline chart on a fixed 640x400 canvas with the data
/// extent annotated on both axes. Pure text output: byte-stable for a
/// given input, diffable in tests.
inline std::string line_chart(const std::string& title, const std::vector<Series>& series,
                              const std::string& x_label, const std::string& y_label) {
    const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 45;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const Series& s : series)
        for (const auto& [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
                      "height=\"400\" viewBox=\"0 0 640 400\">\n";
    out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    out += detail::text(W / 2, 20, title, "middle");
    // frame
    out += "<rect x=\"" + detail::px(L) + "\" y=\"" + detail::px(T) + "\" width=\"" +
           detail::px(W - L - R) + "\" height=\"" + detail::px(H - T - B) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    // axis extent labels
    out += detail::text(L, H - B + 16, fmt_double(xmin));
    out += detail::text(W - R, H - B + 16, fmt_double(xmax), "end");
    out += detail::text(L - 6, H - B, fmt_double(ymin), "end");
    out += detail::text(L - 6, T + 10, fmt_double(ymax), "end");
    out += detail::text(W / 2, H - 8, x_label, "middle");
    out += detail::text(14, T - 8, y_label);

    std::size_t idx = 0;
    for (const Series& s : series) {
        if (!s.points.empty()) {
            out += "<polyline fill=\"none\" stroke=\"";
            out += detail::palette(idx);
            out += "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points)
                out += detail::px(sx(x)) + "," + detail::px(sy(y)) + " ";
            out += "\"/>\n";
        }
        // legend row
        const double ly = T + 14 + 14 * static_cast<double>(idx);
        out += "<rect x=\"" + detail::px(L + 8) + "\" y=\"" + detail::px(ly - 9) +
               "\" width=\"10\" height=\"10\" fill=\"";
        out += detail::palette(idx);
        out += "\"/>\n";
        out += detail::text(L + 22, ly, s.name);
        ++idx;
    }
    out += "</svg>\n";
    return out;
}

/// Grid heatmap of a matrix, blue (minimum) to red (maximum), with the
/// color-scale extent annotated as text.
inline std::string heatmap(const std::string& title, const Matrix& values) {
    const std::size_t rows = values.rows(), cols = values.cols();
    double vmin = 0, vmax = 0;
    if (rows && cols) {
        vmin = vmax = values(0, 0);
        for (double v : values.data()) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    const std::size_t longest = std::max<std::size_t>(1, std::max(rows, cols));
    const int cell = std::max<int>(2, static_cast<int>(600 / longest));
    const int gw = cell * static_cast<int>(cols), gh = cell * static_cast<int>(rows);
    const int W = gw + 40, H = gh + 70;

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(W) + "\" height=\"" + std::to_string(H) +
                      "\" viewBox=\"0 0 " + std::to_string(W) + " " + std::to_string(H) +
                      "\">\n";
    out += "<rect width=\"" + std::to_string(W) + "\" height=\"" + std::to_string(H) +
           "\" fill=\"white\"/>\n";
    out += detail::text(20, 20, title);
    out += detail::text(20, 38, "min=" + fmt_double(vmin) + " max=" + fmt_double(vmax));
    const double span = vmax > vmin ? vmax - vmin : 1.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double t = (values(r, c) - vmin) / span;
            const int red = static_cast<int>(30 + t * 190);
            const int green = static_cast<int>(60 - t * 20);
            const int blue = static_cast<int>(200 - t * 170);
            out += "<rect x=\"" + std::to_string(20 + static_cast<int>(c) * cell) + "\" y=\"" +
                   std::to_string(50 + static_cast<int>(r) * cell) + "\" width=\"" +
                   std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
                   "\" fill=\"rgb(" + std::to_string(red) + "," + std::to_string(green) + "," +
                   std::to_string(blue) + ")\"/>\n";
        }
    out += "</svg>\n";
    return out;
}

} // namespace svg
} // namespace xbarsim
