#include "mfgexec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mfgexec {

namespace {

constexpr double kWidth = 960.0, kHeight = 540.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::size_t column_index(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == name) return i;
    }
    throw std::invalid_argument("unknown column: " + name);
}

struct Range {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    static Range of(const std::vector<const std::vector<double>*>& cols) {
        bool any = false;
        Range r;
        for (const auto* c : cols) {
            for (double v : *c) {
                if (!std::isfinite(v)) continue;
                if (!any) {
                    r.lo = r.hi = v;
                    any = true;
                } else {
                    r.expand(v);
                }
            }
        }
        if (!any) return {0.0, 1.0};
        if (r.hi == r.lo) {
            r.lo -= 0.5;
            r.hi += 0.5;
        }
        return r;
    }
};

std::string num(double v) { return format_double(v); }

void open_svg(std::string& s) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" "
         "viewBox=\"0 0 960 540\">\n";
    s += "<rect width=\"960\" height=\"540\" fill=\"white\"/>\n";
}

void draw_axes(std::string& s, const std::string& x_label, const std::string& y_label,
               const Range& xr, const Range& yr, const std::string& title) {
    const double x0 = kMarginL, x1 = kWidth - kMarginR;
    const double y0 = kHeight - kMarginB, y1 = kMarginT;
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
         num(y0) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(y1) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12.0) +
         "\" font-size=\"14\" text-anchor=\"middle\">" + x_label + "</text>\n";
    s += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num((y0 + y1) / 2) + ")\">" + y_label + "</text>\n";
    s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" +
         title + "</text>\n";
    // corner tick labels carry the data ranges
    s += "<text x=\"" + num(x0) + "\" y=\"" + num(y0 + 18.0) + "\" font-size=\"11\">" +
         num(xr.lo) + "</text>\n";
    s += "<text x=\"" + num(x1) + "\" y=\"" + num(y0 + 18.0) +
         "\" font-size=\"11\" text-anchor=\"end\">" + num(xr.hi) + "</text>\n";
    s += "<text x=\"" + num(x0 - 6.0) + "\" y=\"" + num(y0) +
         "\" font-size=\"11\" text-anchor=\"end\">" + num(yr.lo) + "</text>\n";
    s += "<text x=\"" + num(x0 - 6.0) + "\" y=\"" + num(y1 + 4.0) +
         "\" font-size=\"11\" text-anchor=\"end\">" + num(yr.hi) + "</text>\n";
}

double map_x(double v, const Range& r) {
    return kMarginL + (v - r.lo) / (r.hi - r.lo) * (kWidth - kMarginL - kMarginR);
}
double map_y(double v, const Range& r) {
    return (kHeight - kMarginB) - (v - r.lo) / (r.hi - r.lo) * (kHeight - kMarginT - kMarginB);
}

}  // namespace

std::string render_line_chart(const CsvTable& table, const LinePlotSpec& spec) {
    std::string s;
    open_svg(s);
    if (table.n_rows() == 0) {
        draw_axes(s, spec.x_column, "", {0, 1}, {0, 1}, spec.title);
        s += "<text x=\"480\" y=\"280\" font-size=\"20\" text-anchor=\"middle\" "
             "fill=\"#888888\">no data</text>\n</svg>\n";
        return s;
    }
    const auto& xs = table.data[column_index(table, spec.x_column)];
    std::vector<const std::vector<double>*> ycols;
    for (const auto& name : spec.y_columns) ycols.push_back(&table.data[column_index(table, name)]);
    const Range xr = Range::of({&xs});
    const Range yr = Range::of(ycols);
    draw_axes(s, spec.x_column, spec.y_columns.size() == 1 ? spec.y_columns[0] : "", xr, yr,
              spec.title);
    for (std::size_t c = 0; c < ycols.size(); ++c) {
        const char* color = kSeriesColors[c % 8];
        s += "<polyline fill=\"none\" stroke=\"";
        s += color;
        s += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t r = 0; r < xs.size(); ++r) {
            if (r) s += ' ';
            s += num(map_x(xs[r], xr)) + "," + num(map_y((*ycols[c])[r], yr));
        }
        s += "\"/>\n";
        s += "<text x=\"" + num(kWidth - kMarginR - 8.0) + "\" y=\"" +
             num(kMarginT + 16.0 * static_cast<double>(c + 1)) +
             "\" font-size=\"12\" text-anchor=\"end\" fill=\"";
        s += color;
        s += "\">" + spec.y_columns[c] + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string render_heatmap(const CsvTable& table, const HeatmapSpec& spec) {
    std::string s;
    open_svg(s);
    if (table.n_rows() == 0) {
        draw_axes(s, spec.x_column, spec.y_column, {0, 1}, {0, 1}, spec.title);
        s += "<text x=\"480\" y=\"280\" font-size=\"20\" text-anchor=\"middle\" "
             "fill=\"#888888\">no data</text>\n</svg>\n";
        return s;
    }
    const auto& xs = table.data[column_index(table, spec.x_column)];
    const auto& ys = table.data[column_index(table, spec.y_column)];
    const auto& vs = table.data[column_index(table, spec.value_column)];
    std::map<double, std::size_t> xi, yi;
    for (double x : xs) xi.emplace(x, 0);
    for (double y : ys) yi.emplace(y, 0);
    std::size_t i = 0;
    for (auto& kv : xi) kv.second = i++;
    i = 0;
    for (auto& kv : yi) kv.second = i++;
    const double nx = static_cast<double>(xi.size()), ny = static_cast<double>(yi.size());
    const Range xr = Range::of({&xs}), yr = Range::of({&ys}), vr = Range::of({&vs});
    draw_axes(s, spec.x_column, spec.y_column, xr, yr, spec.title);
    const double cw = (kWidth - kMarginL - kMarginR) / nx;
    const double ch = (kHeight - kMarginT - kMarginB) / ny;
    for (std::size_t r = 0; r < xs.size(); ++r) {
        const double u = (vs[r] - vr.lo) / (vr.hi - vr.lo);
        // blue -> white -> red ramp, rounded to stable integers
        const int red = static_cast<int>(std::lround(255.0 * std::min(1.0, 2.0 * u)));
        const int blue = static_cast<int>(std::lround(255.0 * std::min(1.0, 2.0 * (1.0 - u))));
        const int green = std::min(red, blue);
        const double px = kMarginL + static_cast<double>(xi[xs[r]]) * cw;
        const double py = (kHeight - kMarginB) - static_cast<double>(yi[ys[r]] + 1) * ch;
        s += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(cw) +
             "\" height=\"" + num(ch) + "\" fill=\"rgb(" + std::to_string(red) + "," +
             std::to_string(green) + "," + std::to_string(blue) + ")\"/>\n";
    }
    s += "<text x=\"" + num(kWidth - kMarginR - 8.0) + "\" y=\"" + num(kMarginT + 16.0) +
         "\" font-size=\"12\" text-anchor=\"end\">" + spec.value_column + " in [" + num(vr.lo) +
         ", " + num(vr.hi) + "]</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace mfgexec
