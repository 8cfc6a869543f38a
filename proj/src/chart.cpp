#include "coopnorm/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

#include "coopnorm/errors.hpp"

namespace coopnorm {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

// Widens a degenerate range so that a constant series still gets an axis.
std::pair<double, double> padded_range(double lo, double hi) {
    if (hi > lo) return {lo, hi};
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
    return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const Table& records, const std::string& x, const std::string& y, const std::string& group,
                       const ChartOptions& options) {
    if (records.empty()) throw EmptyResultError("no records to chart");
    const std::size_t xi = records.column(x);
    const std::size_t yi = records.column(y);
    std::vector<std::size_t> group_cols;
    for (std::size_t start = 0; !group.empty() && start <= group.size();) {
        const std::size_t end = std::min(group.find(',', start), group.size());
        group_cols.push_back(records.column(group.substr(start, end - start)));
        start = end + 1;
    }

    std::vector<Series> series;
    for (const auto& row : records.rows()) {
        const double* xv = std::get_if<double>(&row[xi]);
        const double* yv = std::get_if<double>(&row[yi]);
        if (!xv || !yv || !std::isfinite(*xv) || !std::isfinite(*yv)) continue;
        std::string label;
        for (std::size_t g : group_cols) {
            label += (label.empty() ? "" : ", ") + records.columns()[g] + "=" + format_cell(row[g]);
        }
        if (label.empty()) label = y;
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back({label, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(*xv, *yv);
    }
    if (series.empty()) throw EmptyResultError("no numeric points in columns '" + x + "' and '" + y + "'");

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (const auto& [px, py] : s.points) {
            xmin = std::min(xmin, px);
            xmax = std::max(xmax, px);
            ymin = std::min(ymin, py);
            ymax = std::max(ymax, py);
        }
    }
    std::tie(xmin, xmax) = padded_range(xmin, xmax);
    std::tie(ymin, ymax) = padded_range(ymin, ymax);

    const double W = options.width, H = options.height;
    const double left = 70, right = 170, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double v) { return top + ph - (v - ymin) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        svg << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
            << " font-size=\"15\">" << escape(options.title) << "</text>\n";
    }

    // Axes and ticks.
    svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
        << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(left + pw)
        << "\" y2=\"" << fixed(top + ph) << "\"/>\n"
        << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
        << fixed(top + ph) << "\"/>\n</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int kTicks = 5;
    for (int k = 0; k <= kTicks; ++k) {
        const double xv = xmin + (xmax - xmin) * k / kTicks;
        const double yv = ymin + (ymax - ymin) * k / kTicks;
        svg << "<line x1=\"" << fixed(sx(xv)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(sx(xv))
            << "\" y2=\"" << fixed(top + ph + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed(sx(xv)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">"
            << escape(format_number(round_to_serialized(xv))) << "</text>\n"
            << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(sy(yv)) << "\" x2=\"" << fixed(left)
            << "\" y2=\"" << fixed(sy(yv)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(yv) + 4) << "\" text-anchor=\"end\">"
            << escape(format_number(std::round(yv * 1e4) / 1e4)) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(H - 10) << "\" text-anchor=\"middle\">"
        << escape(x) << "</text>\n"
        << "<text x=\"16\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fixed(top + ph / 2) << ")\">" << escape(y) << "</text>\n</g>\n";

    // Data.
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        if (s.points.size() == 1) {
            svg << "<circle cx=\"" << fixed(sx(s.points[0].first)) << "\" cy=\"" << fixed(sy(s.points[0].second))
                << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
            continue;
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t p = 0; p < s.points.size(); ++p) {
            svg << (p ? " " : "") << fixed(sx(s.points[p].first)) << ',' << fixed(sy(s.points[p].second));
        }
        svg << "\"/>\n";
    }

    // Legend.
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double ly = top + 10 + 20.0 * static_cast<double>(k);
        const double lx = left + pw + 15;
        svg << "<rect x=\"" << fixed(lx) << "\" y=\"" << fixed(ly - 6) << "\" width=\"18\" height=\"4\" fill=\""
            << kPalette[k % std::size(kPalette)] << "\"/>\n"
            << "<text x=\"" << fixed(lx + 24) << "\" y=\"" << fixed(ly) << "\">" << escape(series[k].label)
            << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace coopnorm
