#include "jsr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 40.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf"};
constexpr int kPaletteSize = 7;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << tick(kWidth)
        << "\" height=\"" << tick(kHeight) << "\" viewBox=\"0 0 " << tick(kWidth) << " "
        << tick(kHeight) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"17\">"
        << escape(title) << "</text>\n";
}

void axis_labels(std::ostringstream& out, const std::string& x_label,
                 const std::string& y_label) {
    out << "<text x=\"" << num(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\""
        << num(kHeight - 14) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << escape(x_label) << "</text>\n"
        << "<text x=\"20\" y=\"" << num(kTop + (kHeight - kTop - kBottom) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 20 "
        << num(kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << escape(y_label)
        << "</text>\n";
}

void frame(std::ostringstream& out) {
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
        << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
}

double plot_width() { return kWidth - kLeft - kRight; }
double plot_height() { return kHeight - kTop - kBottom; }

void y_ticks(std::ostringstream& out, double y_max) {
    for (int i = 0; i <= 4; ++i) {
        const double value = y_max * i / 4.0;
        const double y = kTop + plot_height() * (1.0 - static_cast<double>(i) / 4.0);
        out << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(y) << "\" stroke=\"#333333\"/>\n"
            << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick(value) << "</text>\n";
    }
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<double>& x,
                           const std::vector<SvgSeries>& series) {
    if (x.empty() || series.empty()) {
        throw InvalidInputError("svg_line_chart: need at least one point and one series");
    }
    double y_max = 1.0;
    for (const auto& s : series) {
        if (s.y.size() != x.size()) {
            throw InvalidInputError("svg_line_chart: series length differs from x axis");
        }
        for (double v : s.y) y_max = std::max(y_max, v);
    }
    const double x_min = *std::min_element(x.begin(), x.end());
    const double x_max = *std::max_element(x.begin(), x.end());
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;

    const auto px = [&](double v) {
        return kLeft + plot_width() * (v - x_min) / x_span;
    };
    const auto py = [&](double v) {
        return kTop + plot_height() * (1.0 - v / y_max);
    };

    std::ostringstream out;
    open_svg(out, title);
    frame(out);
    y_ticks(out, y_max);
    for (double v : x) {
        out << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(kTop + plot_height())
            << "\" x2=\"" << num(px(v)) << "\" y2=\"" << num(kTop + plot_height() + 4)
            << "\" stroke=\"#333333\"/>\n"
            << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kTop + plot_height() + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick(v) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out << ' ';
            out << num(px(x[i])) << ',' << num(py(series[s].y[i]));
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < x.size(); ++i) {
            out << "<circle cx=\"" << num(px(x[i])) << "\" cy=\"" << num(py(series[s].y[i]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kTop + 14.0 + 16.0 * static_cast<double>(s);
        out << "<rect x=\"" << num(kWidth - kRight - 150) << "\" y=\"" << num(ly - 9)
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n"
            << "<text x=\"" << num(kWidth - kRight - 133) << "\" y=\"" << num(ly + 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[s].name)
            << "</text>\n";
    }
    axis_labels(out, x_label, y_label);
    out << "</svg>\n";
    return out.str();
}

std::string svg_bar_chart(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::map<int, int>& bins) {
    if (bins.empty()) {
        throw InvalidInputError("svg_bar_chart: need at least one bin");
    }
    double y_max = 1.0;
    for (const auto& [key, count] : bins) y_max = std::max(y_max, static_cast<double>(count));

    const double slot = plot_width() / static_cast<double>(bins.size());
    const double bar = slot * 0.7;

    std::ostringstream out;
    open_svg(out, title);
    frame(out);
    y_ticks(out, y_max);
    std::size_t index = 0;
    for (const auto& [key, count] : bins) {
        const double x0 = kLeft + slot * static_cast<double>(index) + (slot - bar) / 2.0;
        const double height = plot_height() * static_cast<double>(count) / y_max;
        out << "<rect x=\"" << num(x0) << "\" y=\"" << num(kTop + plot_height() - height)
            << "\" width=\"" << num(bar) << "\" height=\"" << num(height)
            << "\" fill=\"#1f77b4\"/>\n"
            << "<text x=\"" << num(x0 + bar / 2.0) << "\" y=\""
            << num(kTop + plot_height() + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << key
            << "</text>\n";
        ++index;
    }
    axis_labels(out, x_label, y_label);
    out << "</svg>\n";
    return out.str();
}

std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<int>& xs,
                        const std::vector<int>& ys, const std::vector<double>& values,
                        const std::vector<bool>& masked) {
    if (xs.empty() || ys.empty() || values.size() != xs.size() * ys.size() ||
        masked.size() != values.size()) {
        throw InvalidInputError("svg_heatmap: grid and value sizes disagree");
    }
    const double cell_w = plot_width() / static_cast<double>(xs.size());
    const double cell_h = plot_height() / static_cast<double>(ys.size());

    std::ostringstream out;
    open_svg(out, title);
    for (std::size_t row = 0; row < ys.size(); ++row) {
        for (std::size_t col = 0; col < xs.size(); ++col) {
            const std::size_t index = row * xs.size() + col;
            const double x0 = kLeft + cell_w * static_cast<double>(col);
            // Larger row values render toward the top, like an ascending axis.
            const double y0 = kTop + cell_h * static_cast<double>(ys.size() - 1 - row);
            std::string fill;
            if (masked[index]) {
                fill = "#d9d9d9";
            } else {
                const double v = std::clamp(values[index], 0.0, 1.0);
                // White (rate 0) to a deep blue (rate 1).
                const int r = static_cast<int>(std::lround(255.0 - v * (255.0 - 8.0)));
                const int g = static_cast<int>(std::lround(255.0 - v * (255.0 - 81.0)));
                const int b = static_cast<int>(std::lround(255.0 - v * (255.0 - 156.0)));
                char buf[8];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
                fill = buf;
            }
            out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\""
                << num(cell_w) << "\" height=\"" << num(cell_h) << "\" fill=\"" << fill
                << "\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n";
        }
    }
    for (std::size_t col = 0; col < xs.size(); ++col) {
        out << "<text x=\"" << num(kLeft + cell_w * (static_cast<double>(col) + 0.5))
            << "\" y=\"" << num(kTop + plot_height() + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << xs[col] << "</text>\n";
    }
    for (std::size_t row = 0; row < ys.size(); ++row) {
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\""
            << num(kTop + cell_h * (static_cast<double>(ys.size() - 1 - row) + 0.5) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ys[row]
            << "</text>\n";
    }
    frame(out);
    axis_labels(out, x_label, y_label);
    out << "</svg>\n";
    return out.str();
}

}  // namespace jsr
