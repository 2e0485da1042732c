#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uts/report.hpp"
#include "uts/time_series.hpp"
#include "uts/uar.hpp"

namespace uts {

namespace detail {

struct PlotFrame {
    double width = 640.0;
    double height = 400.0;
    double margin = 48.0;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;

    [[nodiscard]] double x(double v) const {
        return margin + (v - x_min) / (x_max - x_min) * (width - 2.0 * margin);
    }
    [[nodiscard]] double y(double v) const {
        return height - margin - (v - y_min) / (y_max - y_min) * (height - 2.0 * margin);
    }
};

/// Expands a degenerate value range so the frame never divides by zero.
inline void pad_range(double& lo, double& hi) {
    if (hi <= lo) {
        lo -= 1.0;
        hi += 1.0;
    }
}

inline std::string svg_open(const PlotFrame& f, const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_int(f.width) +
                    "\" height=\"" + fmt_int(f.height) + "\" viewBox=\"0 0 " + fmt_int(f.width) +
                    " " + fmt_int(f.height) + "\">\n";
    s += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "  <text x=\"" + fmt4(f.width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         title + "</text>\n";
    s += "  <rect x=\"" + fmt4(f.margin) + "\" y=\"" + fmt4(f.margin) + "\" width=\"" +
         fmt4(f.width - 2.0 * f.margin) + "\" height=\"" + fmt4(f.height - 2.0 * f.margin) +
         "\" fill=\"none\" stroke=\"#777\"/>\n";
    return s;
}

inline std::string svg_circle(double cx, double cy, const char* fill) {
    return "  <circle cx=\"" + fmt4(cx) + "\" cy=\"" + fmt4(cy) + "\" r=\"2.5\" fill=\"" + fill +
           "\"/>\n";
}

inline std::string svg_hline(const PlotFrame& f, double value, const char* stroke, bool dashed) {
    std::string s = "  <line x1=\"" + fmt4(f.margin) + "\" y1=\"" + fmt4(f.y(value)) + "\" x2=\"" +
                    fmt4(f.width - f.margin) + "\" y2=\"" + fmt4(f.y(value)) + "\" stroke=\"" +
                    stroke + "\"";
    if (dashed) s += " stroke-dasharray=\"6 4\"";
    s += "/>\n";
    return s;
}

/// Writes through a sibling temp file and renames, so readers never observe a
/// half-written plot.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write output file: " + path.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("cannot write output file: " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

/**
 * @brief Write the report's plots into `out_dir` and return the paths written.
 *
 * series.svg shows the observations, residuals.svg shows the fit residuals
 * with the hypothesis test band, and ate.svg (only when the report carries a
 * cross-validation section) shows the average test error per candidate order.
 * Files are written atomically.
 *
 * @throws std::runtime_error when a file cannot be written
 */
inline std::vector<std::string> emit_plots(const AnalysisReport& report, const TimeSeries& series,
                                           const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::vector<std::string> written;

    const auto& x = series.values();
    {
        detail::PlotFrame f;
        f.x_min = 1.0;
        f.x_max = static_cast<double>(x.size());
        f.y_min = *std::min_element(x.begin(), x.end());
        f.y_max = *std::max_element(x.begin(), x.end());
        detail::pad_range(f.y_min, f.y_max);

        std::string svg = detail::svg_open(f, report.series_name);
        for (std::size_t t = 0; t < x.size(); ++t) {
            svg += detail::svg_circle(f.x(static_cast<double>(t + 1)), f.y(x[t]), "#1f6fb2");
        }
        svg += "</svg>\n";
        const fs::path path = dir / "series.svg";
        detail::write_file_atomic(path, svg);
        written.push_back(path.string());
    }

    {
        const std::vector<double> resid = residuals(series, report.model);
        const std::size_t k = static_cast<std::size_t>(report.model.order);

        detail::PlotFrame f;
        f.x_min = static_cast<double>(k + 1);
        f.x_max = static_cast<double>(x.size());
        const auto [lo, hi] = std::minmax_element(resid.begin(), resid.end());
        f.y_min = std::min(*lo, report.test.lower);
        f.y_max = std::max(*hi, report.test.upper);
        detail::pad_range(f.y_min, f.y_max);

        std::string svg = detail::svg_open(f, "residuals");
        svg += detail::svg_hline(f, report.test.lower, "#b23a1f", true);
        svg += detail::svg_hline(f, report.test.upper, "#b23a1f", true);
        for (std::size_t i = 0; i < resid.size(); ++i) {
            const double t = static_cast<double>(k + 1 + i);
            const bool outside = resid[i] < report.test.lower || resid[i] > report.test.upper;
            svg += detail::svg_circle(f.x(t), f.y(resid[i]), outside ? "#b23a1f" : "#1f6fb2");
        }
        svg += "</svg>\n";
        const fs::path path = dir / "residuals.svg";
        detail::write_file_atomic(path, svg);
        written.push_back(path.string());
    }

    if (report.cv) {
        const auto& ate = report.cv->result.ate;
        detail::PlotFrame f;
        f.x_min = 0.5;
        f.x_max = static_cast<double>(ate.size()) + 0.5;
        f.y_min = 0.0;
        f.y_max = *std::max_element(ate.begin(), ate.end());
        detail::pad_range(f.y_min, f.y_max);

        std::string svg = detail::svg_open(f, "average test error by order");
        for (std::size_t i = 0; i < ate.size(); ++i) {
            const double order = static_cast<double>(i + 1);
            const double x0 = f.x(order - 0.35);
            const double x1 = f.x(order + 0.35);
            const double y_top = f.y(ate[i]);
            const double y_base = f.y(0.0);
            const bool chosen = static_cast<int>(order) == report.cv->result.chosen_order;
            svg += "  <rect x=\"" + detail::fmt4(x0) + "\" y=\"" + detail::fmt4(y_top) +
                   "\" width=\"" + detail::fmt4(x1 - x0) + "\" height=\"" +
                   detail::fmt4(y_base - y_top) + "\" fill=\"" + (chosen ? "#1f6fb2" : "#9bb8d0") +
                   "\"/>\n";
        }
        svg += "</svg>\n";
        const fs::path path = dir / "ate.svg";
        detail::write_file_atomic(path, svg);
        written.push_back(path.string());
    }

    return written;
}

}  // namespace uts
