#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uts/normal_uncertainty.hpp"
#include "uts/time_series.hpp"
#include "uts/uar.hpp"
#include "uts/validation.hpp"

namespace uts {

/// Knobs for the end-to-end analysis; defaults reproduce the bundled case study.
struct PipelineConfig {
    int max_order = 10;
    std::size_t train_length = 22;
    double alpha = 0.05;
    double level = 0.95;
    std::optional<int> order_override; ///< skip cross-validation and fit this order
    CvMetric cv_metric = CvMetric::squared;
    CvWindow cv_window = CvWindow::expanding;
};

/// Cross-validation result together with the settings that produced it.
struct CvSection {
    CvMetric metric;
    CvWindow window;
    CvReport result;
};

/// Forecast values as shown in the text report. For integer-valued series the
/// point is rounded to the nearest integer and the interval is recentered on
/// it; endpoints carry 4 decimal places.
struct ForecastDisplay {
    double point;
    Interval interval;
};

struct ForecastSection {
    double point;
    double level;
    Interval interval;
    std::optional<ForecastDisplay> display;
};

/**
 * @brief Everything the `report` command emits, in one structure.
 *
 * `ks` and `forecast` are absent when the hypothesis test rejects; `warning`
 * says so. `cv` is absent when the order was fixed by hand.
 */
struct AnalysisReport {
    std::string series_name;
    std::size_t series_length = 0;
    double series_min = 0.0;
    double series_max = 0.0;
    bool series_integer_valued = false;
    std::optional<CvSection> cv;
    UarModel model;
    DisturbanceEstimate disturbance{};
    HypothesisTestResult test;
    std::optional<KsResult> ks;
    std::optional<ForecastSection> forecast;
    std::optional<std::string> warning;
};

enum class ReportFormat { json, text };

namespace detail {

template <typename F>
auto pipeline_stage(const char* name, F&& body) {
    try {
        return body();
    } catch (const std::domain_error& e) {
        throw std::domain_error(std::string(name) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(name) + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

inline double round4(double v) {
    const double r = std::round(v * 1e4) / 1e4;
    return r + 0.0; // never -0.0
}

/// Fixed 4-decimal rendering; negative zero prints as "0.0000".
inline std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s.erase(0, 1);
    return s;
}

inline std::string fmt_int(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
}

/// Shortest rendering for percentages: 0.95 becomes "95", 0.975 "97.5".
inline std::string fmt_percent(double level) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", level * 100.0);
    return buf;
}

/// Plain rendering without forced decimals: 78 stays "78".
inline std::string fmt_plain(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline const char* metric_name(CvMetric metric) {
    return metric == CvMetric::squared ? "squared" : "absolute";
}

inline const char* window_name(CvWindow window) {
    return window == CvWindow::expanding ? "expanding" : "rolling";
}

}  // namespace detail

/**
 * @brief Run the full analysis: order selection, fit, disturbance estimation,
 * adequacy test, residual split diagnostic, one-step forecast.
 *
 * When the hypothesis test rejects, the pipeline stops there and returns the
 * report built so far with a warning; the KS diagnostic and forecast are
 * omitted. Errors from individual stages propagate with the stage name
 * ("cv", "fit", "residuals", "disturbance", "test", "ks", "forecast")
 * prefixed to the message.
 */
[[nodiscard]] inline AnalysisReport run_pipeline(const TimeSeries& series,
                                                 const PipelineConfig& config = {},
                                                 const std::string& series_name = "series") {
    AnalysisReport report;
    report.series_name = series_name;
    report.series_length = series.size();
    const auto [min_it, max_it] =
        std::minmax_element(series.values().begin(), series.values().end());
    report.series_min = *min_it;
    report.series_max = *max_it;
    report.series_integer_valued = series.integer_valued();

    int order = 0;
    if (config.order_override) {
        order = *config.order_override;
    } else {
        CvReport cv = detail::pipeline_stage("cv", [&] {
            return cross_validate(series, config.max_order, config.train_length,
                                  config.cv_metric, config.cv_window);
        });
        order = cv.chosen_order;
        report.cv = CvSection{config.cv_metric, config.cv_window, std::move(cv)};
    }

    report.model = detail::pipeline_stage("fit", [&] { return fit(series, order); });
    const std::vector<double> resid =
        detail::pipeline_stage("residuals", [&] { return residuals(series, report.model); });
    report.disturbance =
        detail::pipeline_stage("disturbance", [&] { return estimate_disturbance(resid); });

    const NormalUncertaintyDistribution dist = detail::pipeline_stage("test", [&] {
        return NormalUncertaintyDistribution(report.disturbance.e_hat,
                                             report.disturbance.sigma_hat);
    });
    report.test = detail::pipeline_stage("test", [&] {
        return uncertain_hypothesis_test(resid, dist, config.alpha,
                                         static_cast<std::size_t>(order) + 1);
    });

    if (report.test.rejected) {
        report.warning =
            "hypothesis test rejected the fitted disturbance model; "
            "ks diagnostic and forecast omitted";
        return report;
    }

    report.ks = detail::pipeline_stage("ks", [&] { return split_residual_diagnostic(resid); });

    const ForecastResult fc = detail::pipeline_stage(
        "forecast", [&] { return forecast(series, report.model, report.disturbance, config.level); });
    ForecastSection section{fc.point, fc.level, fc.interval, std::nullopt};
    if (report.series_integer_valued) {
        const double shown = std::round(fc.point);
        const double half_width = fc.interval.width() / 2.0;
        section.display = ForecastDisplay{
            shown, Interval{detail::round4(shown - half_width), detail::round4(shown + half_width)}};
    }
    report.forecast = section;
    return report;
}

/**
 * @brief Render a report as canonical JSON (stable field order, trailing
 * newline) or as the human-readable text summary.
 */
[[nodiscard]] inline std::string emit_report(const AnalysisReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        using json = nlohmann::ordered_json;
        json j;
        j["series"] = {{"name", report.series_name},
                       {"n", report.series_length},
                       {"min", report.series_min},
                       {"max", report.series_max},
                       {"integer_valued", report.series_integer_valued}};
        if (report.cv) {
            j["cv"] = {{"max_order", report.cv->result.max_order},
                       {"train_length", report.cv->result.train_length},
                       {"metric", detail::metric_name(report.cv->metric)},
                       {"window", detail::window_name(report.cv->window)},
                       {"ate", report.cv->result.ate},
                       {"chosen_order", report.cv->result.chosen_order}};
        }
        j["model"] = {{"k", report.model.order},
                      {"intercept", report.model.intercept},
                      {"coefficients", report.model.coefficients},
                      {"rank_deficient", report.model.rank_deficient}};
        j["disturbance"] = {{"e_hat", report.disturbance.e_hat},
                            {"sigma_hat", report.disturbance.sigma_hat},
                            {"divisor", report.disturbance.count}};
        j["test"] = {{"alpha", report.test.alpha},
                     {"lower", report.test.lower},
                     {"upper", report.test.upper},
                     {"outlier_indices", report.test.outlier_indices},
                     {"residual_count", report.test.residual_count},
                     {"critical_count", report.test.critical_count()},
                     {"rejected", report.test.rejected}};
        if (report.ks) {
            j["ks"] = {{"statistic", report.ks->statistic}, {"p_value", report.ks->p_value}};
        }
        if (report.forecast) {
            json f = {{"point", report.forecast->point},
                      {"level", report.forecast->level},
                      {"interval",
                       {{"lower", report.forecast->interval.lower},
                        {"upper", report.forecast->interval.upper}}}};
            if (report.forecast->display) {
                f["display"] = {{"point", report.forecast->display->point},
                                {"interval",
                                 {{"lower", report.forecast->display->interval.lower},
                                  {"upper", report.forecast->display->interval.upper}}}};
            }
            j["forecast"] = std::move(f);
        }
        if (report.warning) {
            j["warning"] = *report.warning;
        }
        return j.dump(2) + "\n";
    }

    using detail::fmt4;
    std::string out;
    out += "series: " + report.series_name + ", n " + std::to_string(report.series_length) +
           ", min " + detail::fmt_plain(report.series_min) + ", max " +
           detail::fmt_plain(report.series_max) + "\n";
    if (report.cv) {
        out += std::string("cross-validation: window ") + detail::window_name(report.cv->window) +
               ", metric " + detail::metric_name(report.cv->metric) + ", train length " +
               std::to_string(report.cv->result.train_length) + ", max order " +
               std::to_string(report.cv->result.max_order) + "\n";
        out += "  ate:";
        for (double v : report.cv->result.ate) out += " " + fmt4(v);
        out += "\n  chosen order: " + std::to_string(report.cv->result.chosen_order) + "\n";
    }
    out += "model: order " + std::to_string(report.model.order) + ", intercept " +
           fmt4(report.model.intercept) + ", coefficients";
    for (double c : report.model.coefficients) out += " " + fmt4(c);
    if (report.model.rank_deficient) out += " (rank deficient)";
    out += "\n";
    out += "disturbance: e_hat " + fmt4(report.disturbance.e_hat) + ", sigma_hat " +
           fmt4(report.disturbance.sigma_hat) + ", divisor " +
           std::to_string(report.disturbance.count) + "\n";
    out += "hypothesis test: alpha " + fmt4(report.test.alpha) + ", band [" +
           fmt4(report.test.lower) + ", " + fmt4(report.test.upper) + "], outliers " +
           std::to_string(report.test.outlier_indices.size()) + " of " +
           std::to_string(report.test.residual_count);
    if (!report.test.outlier_indices.empty()) {
        out += " at t =";
        for (std::size_t t : report.test.outlier_indices) out += " " + std::to_string(t);
    }
    out += ", critical count " + std::to_string(report.test.critical_count()) + ", " +
           (report.test.rejected ? "rejected" : "accepted") + "\n";
    if (report.ks) {
        out += "residual split: ks statistic " + fmt4(report.ks->statistic) + ", p-value " +
               fmt4(report.ks->p_value) + "\n";
    }
    if (report.forecast) {
        const auto& f = *report.forecast;
        if (f.display) {
            out += "forecast: " + detail::fmt_int(f.display->point) + "\n";
            out += detail::fmt_percent(f.level) + "% interval: [" + fmt4(f.display->interval.lower) +
                   ", " + fmt4(f.display->interval.upper) + "]\n";
        } else {
            out += "forecast: " + fmt4(f.point) + "\n";
            out += detail::fmt_percent(f.level) + "% interval: [" + fmt4(f.interval.lower) + ", " +
                   fmt4(f.interval.upper) + "]\n";
        }
    }
    if (report.warning) {
        out += "warning: " + *report.warning + "\n";
    }
    return out;
}

}  // namespace uts
