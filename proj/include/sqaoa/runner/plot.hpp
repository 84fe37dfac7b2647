#pragma once

// Self-contained SVG line/scatter charts built from result rows alone.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqaoa/error.hpp"
#include "sqaoa/runner/results.hpp"

namespace sqaoa::runner {

enum class PlotStyle { ratio_vs_p, ratio_vs_scaled_p, delta_vs_alignment };

inline std::string_view to_string(PlotStyle s) {
    switch (s) {
        case PlotStyle::ratio_vs_p: return "ratio_vs_p";
        case PlotStyle::ratio_vs_scaled_p: return "ratio_vs_scaled_p";
        case PlotStyle::delta_vs_alignment: return "delta_vs_alignment";
    }
    return "?";
}

inline PlotStyle parse_plot_style(std::string_view s) {
    for (auto style : {PlotStyle::ratio_vs_p, PlotStyle::ratio_vs_scaled_p, PlotStyle::delta_vs_alignment})
        if (to_string(style) == s) return style;
    throw ConfigError("unknown plot style '" + std::string(s) + "'");
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool connect = true;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
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

// Round tick spacing (1, 2 or 5 times a power of ten) for about `target` ticks.
inline double tick_step(double span, int target = 6) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0})
        if (raw <= f * mag) return f * mag;
    return 10.0 * mag;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << (std::abs(v) < 1e-12 ? 0.0 : v);
    return os.str();
}

inline constexpr std::string_view kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace detail

inline std::string render_svg(const Chart& chart) {
    using detail::fmt;
    constexpr double width = 760, height = 440;
    constexpr double left = 70, right = 230, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : chart.series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin < 1e-12) ymin -= 0.05, ymax += 0.05;
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    xmin -= xpad, xmax += xpad, ymin -= ypad, ymax += ypad;

    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::xml_escape(chart.title) << "</text>\n";

    // Grid and ticks.
    const double xstep = detail::tick_step(xmax - xmin), ystep = detail::tick_step(ymax - ymin);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12; t += xstep) {
        os << "<line x1=\"" << sx(t) << "\" y1=\"" << top << "\" x2=\"" << sx(t) << "\" y2=\"" << top + plot_h
           << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << sx(t) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << fmt(t)
           << "</text>\n";
    }
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12; t += ystep) {
        os << "<line x1=\"" << left << "\" y1=\"" << sy(t) << "\" x2=\"" << left + plot_w << "\" y2=\"" << sy(t)
           << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << sy(t) + 4 << "\" text-anchor=\"end\">" << fmt(t)
           << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
       << detail::xml_escape(chart.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << detail::xml_escape(chart.y_label) << "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const auto color = detail::kPalette[i % std::size(detail::kPalette)];
        auto pts = s.points;
        if (s.connect) {
            std::sort(pts.begin(), pts.end());
            if (pts.size() > 1) {
                os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
                for (std::size_t k = 0; k < pts.size(); ++k)
                    os << (k ? " " : "") << sx(pts[k].first) << ',' << sy(pts[k].second);
                os << "\"/>\n";
            }
        }
        for (const auto& [x, y] : pts)
            os << "<circle class=\"marker\" cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3.5\" fill=\"" << color
               << "\"/>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(i);
        os << "<g class=\"legend\"><circle cx=\"" << left + plot_w + 18 << "\" cy=\"" << ly << "\" r=\"4\" fill=\""
           << color << "\"/><text x=\"" << left + plot_w + 28 << "\" y=\"" << ly + 4 << "\">"
           << detail::xml_escape(s.name) << "</text></g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// Pairs every row that carries an alignment count with the standard row of
// the same graph and depth; returns (aligned_levels, ratio delta) points.
inline std::vector<std::pair<double, double>> alignment_deltas(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, int>, double> standard;
    for (const auto& r : rows)
        if (r.variant == "standard") standard[{r.graph_id, r.p}] = r.ratio;
    std::vector<std::pair<double, double>> points;
    for (const auto& r : rows) {
        if (!r.aligned_levels || r.variant == "standard") continue;
        auto it = standard.find({r.graph_id, r.p});
        if (it == standard.end()) continue;
        points.emplace_back(*r.aligned_levels, r.ratio - it->second);
    }
    return points;
}

inline std::vector<Chart> build_charts(const std::vector<ResultRow>& rows, PlotStyle style) {
    std::vector<Chart> charts;
    if (style == PlotStyle::delta_vs_alignment) {
        auto points = alignment_deltas(rows);
        if (points.empty()) return charts;
        std::map<double, std::pair<double, int>> buckets;
        for (const auto& [x, y] : points) {
            buckets[x].first += y;
            buckets[x].second += 1;
        }
        Series mean{"bucket mean", {}, true};
        for (const auto& [x, agg] : buckets) mean.points.emplace_back(x, agg.first / agg.second);
        charts.push_back({"Ratio difference vs aligned energy levels", "aligned energy levels",
                          "ratio (sparsified) - ratio (standard)",
                          {Series{"instances", std::move(points), false}, std::move(mean)}});
        return charts;
    }
    std::vector<std::string> graph_order;
    std::map<std::string, std::vector<std::string>> series_order;
    std::map<std::string, std::map<std::string, Series>> grouped;
    for (const auto& r : rows) {
        if (!grouped.count(r.graph_id)) graph_order.push_back(r.graph_id);
        auto& by_series = grouped[r.graph_id];
        const auto key = r.series();
        if (!by_series.count(key)) {
            series_order[r.graph_id].push_back(key);
            by_series[key].name = key;
        }
        const double x = style == PlotStyle::ratio_vs_p ? r.p : r.scaled_p;
        by_series[key].points.emplace_back(x, r.ratio);
    }
    for (const auto& gid : graph_order) {
        Chart c;
        c.title = gid;
        c.x_label = style == PlotStyle::ratio_vs_p ? "QAOA depth p" : "gate-count-normalized depth";
        c.y_label = "approximation ratio";
        for (const auto& key : series_order[gid]) c.series.push_back(std::move(grouped[gid][key]));
        charts.push_back(std::move(c));
    }
    return charts;
}

inline std::string sanitize_filename(std::string_view s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? "plot" : out;
}

// Writes one SVG per chart into out_dir; returns the written paths. Empty
// input writes nothing and prints a notice.
inline std::vector<std::filesystem::path> emit_plots(const std::vector<ResultRow>& rows, PlotStyle style,
                                                     const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    const auto charts = build_charts(rows, style);
    if (charts.empty()) {
        std::cerr << "notice: no rows to plot for style " << to_string(style) << '\n';
        return written;
    }
    std::filesystem::create_directories(out_dir);
    for (const auto& chart : charts) {
        const auto name = style == PlotStyle::delta_vs_alignment
                              ? std::string("delta_vs_alignment.svg")
                              : sanitize_filename(chart.title) + "_" + std::string(to_string(style)) + ".svg";
        const auto path = out_dir / name;
        std::ofstream out(path);
        if (!out) throw InputError("cannot write plot '" + path.string() + "'");
        out << render_svg(chart);
        written.push_back(path);
    }
    return written;
}

}  // namespace sqaoa::runner
