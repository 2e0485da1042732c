// Command-line front end for the uncertain time series toolkit.
//
// Exit codes: 0 on success (hypothesis test accepted where one runs),
// 2 when the hypothesis test rejects the fitted model, 1 on usage or
// data errors.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uts/uts.hpp"

namespace {

using nlohmann::ordered_json;

struct Options {
    std::string input;
    std::string fixture;
    int order = 0;
    int max_order = 10;
    std::size_t train_len = 22;
    double alpha = 0.05;
    double level = 0.95;
    std::string cv_metric = "squared";
    std::string cv_window = "expanding";
    std::string format = "text";
    std::string out_dir;
};

uts::TimeSeries load_input(const Options& opt, std::string& name) {
    if (!opt.input.empty()) {
        name = opt.input;
        return uts::load_series(opt.input);
    }
    if (!opt.fixture.empty()) {
        name = opt.fixture;
        return uts::builtin_fixture(opt.fixture);
    }
    throw std::invalid_argument("provide exactly one of --input or --fixture");
}

uts::PipelineConfig make_config(const Options& opt) {
    uts::PipelineConfig config;
    config.max_order = opt.max_order;
    config.train_length = opt.train_len;
    config.alpha = opt.alpha;
    config.level = opt.level;
    if (opt.order > 0) config.order_override = opt.order;
    config.cv_metric =
        opt.cv_metric == "absolute" ? uts::CvMetric::absolute : uts::CvMetric::squared;
    config.cv_window =
        opt.cv_window == "rolling" ? uts::CvWindow::rolling : uts::CvWindow::expanding;
    return config;
}

int resolve_order(const uts::TimeSeries& series, const Options& opt) {
    if (opt.order > 0) return opt.order;
    const uts::PipelineConfig config = make_config(opt);
    return uts::cross_validate(series, config.max_order, config.train_length, config.cv_metric,
                               config.cv_window)
        .chosen_order;
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

ordered_json cv_json(const uts::CvReport& cv, const Options& opt) {
    return {{"max_order", cv.max_order}, {"train_length", cv.train_length},
            {"metric", opt.cv_metric},  {"window", opt.cv_window},
            {"ate", cv.ate},            {"chosen_order", cv.chosen_order}};
}

ordered_json model_json(const uts::UarModel& model) {
    return {{"k", model.order},
            {"intercept", model.intercept},
            {"coefficients", model.coefficients},
            {"rank_deficient", model.rank_deficient}};
}

ordered_json disturbance_json(const uts::DisturbanceEstimate& d) {
    return {{"e_hat", d.e_hat}, {"sigma_hat", d.sigma_hat}, {"divisor", d.count}};
}

ordered_json test_json(const uts::HypothesisTestResult& t) {
    return {{"alpha", t.alpha},
            {"lower", t.lower},
            {"upper", t.upper},
            {"outlier_indices", t.outlier_indices},
            {"residual_count", t.residual_count},
            {"critical_count", t.critical_count()},
            {"rejected", t.rejected}};
}

void print_cv_text(const uts::CvReport& cv, const Options& opt) {
    std::cout << "cross-validation: window " << opt.cv_window << ", metric " << opt.cv_metric
              << ", train length " << cv.train_length << ", max order " << cv.max_order
              << "\n  ate:";
    for (double v : cv.ate) std::cout << " " << uts::detail::fmt4(v);
    std::cout << "\n  chosen order: " << cv.chosen_order << "\n";
}

void print_model_text(const uts::UarModel& model, const uts::DisturbanceEstimate& d) {
    using uts::detail::fmt4;
    std::cout << "model: order " << model.order << ", intercept " << fmt4(model.intercept)
              << ", coefficients";
    for (double c : model.coefficients) std::cout << " " << fmt4(c);
    if (model.rank_deficient) std::cout << " (rank deficient)";
    std::cout << "\ndisturbance: e_hat " << fmt4(d.e_hat) << ", sigma_hat " << fmt4(d.sigma_hat)
              << ", divisor " << d.count << "\n";
}

void print_test_text(const uts::HypothesisTestResult& t) {
    using uts::detail::fmt4;
    std::cout << "hypothesis test: alpha " << fmt4(t.alpha) << ", band [" << fmt4(t.lower) << ", "
              << fmt4(t.upper) << "], outliers " << t.outlier_indices.size() << " of "
              << t.residual_count;
    if (!t.outlier_indices.empty()) {
        std::cout << " at t =";
        for (std::size_t i : t.outlier_indices) std::cout << " " << i;
    }
    std::cout << ", critical count " << t.critical_count() << ", "
              << (t.rejected ? "rejected" : "accepted") << "\n";
}

int run_cv(const Options& opt) {
    std::string name;
    const uts::TimeSeries series = load_input(opt, name);
    const uts::PipelineConfig config = make_config(opt);
    const uts::CvReport cv = uts::cross_validate(series, config.max_order, config.train_length,
                                                 config.cv_metric, config.cv_window);
    if (opt.format == "json") {
        print_json(cv_json(cv, opt));
    } else {
        print_cv_text(cv, opt);
    }
    return 0;
}

int run_fit(const Options& opt) {
    std::string name;
    const uts::TimeSeries series = load_input(opt, name);
    const uts::UarModel model = uts::fit(series, resolve_order(series, opt));
    const uts::DisturbanceEstimate disturbance =
        uts::estimate_disturbance(uts::residuals(series, model));
    if (opt.format == "json") {
        ordered_json j;
        j["model"] = model_json(model);
        j["disturbance"] = disturbance_json(disturbance);
        print_json(j);
    } else {
        print_model_text(model, disturbance);
    }
    return 0;
}

int run_test(const Options& opt) {
    std::string name;
    const uts::TimeSeries series = load_input(opt, name);
    const uts::UarModel model = uts::fit(series, resolve_order(series, opt));
    const std::vector<double> resid = uts::residuals(series, model);
    const uts::DisturbanceEstimate disturbance = uts::estimate_disturbance(resid);
    const uts::NormalUncertaintyDistribution dist(disturbance.e_hat, disturbance.sigma_hat);
    const uts::HypothesisTestResult result = uts::uncertain_hypothesis_test(
        resid, dist, opt.alpha, static_cast<std::size_t>(model.order) + 1);
    if (opt.format == "json") {
        print_json(test_json(result));
    } else {
        print_test_text(result);
    }
    return result.rejected ? 2 : 0;
}

int run_full(const std::string& command, const Options& opt) {
    std::string name;
    const uts::TimeSeries series = load_input(opt, name);
    const uts::AnalysisReport report = uts::run_pipeline(series, make_config(opt), name);
    const int exit_code = report.test.rejected ? 2 : 0;

    if (command == "forecast") {
        if (!report.forecast) {
            std::cerr << "error: " << *report.warning << "\n";
            return 2;
        }
        const auto& f = *report.forecast;
        if (opt.format == "json") {
            ordered_json j = {{"point", f.point},
                              {"level", f.level},
                              {"interval", {{"lower", f.interval.lower}, {"upper", f.interval.upper}}}};
            if (f.display) {
                j["display"] = {{"point", f.display->point},
                                {"interval",
                                 {{"lower", f.display->interval.lower},
                                  {"upper", f.display->interval.upper}}}};
            }
            print_json(j);
        } else {
            using uts::detail::fmt4;
            if (f.display) {
                std::cout << "forecast: " << uts::detail::fmt_int(f.display->point) << "\n"
                          << uts::detail::fmt_percent(f.level) << "% interval: ["
                          << fmt4(f.display->interval.lower) << ", "
                          << fmt4(f.display->interval.upper) << "]\n";
            } else {
                std::cout << "forecast: " << fmt4(f.point) << "\n"
                          << uts::detail::fmt_percent(f.level) << "% interval: ["
                          << fmt4(f.interval.lower) << ", " << fmt4(f.interval.upper) << "]\n";
            }
        }
    } else if (command == "report") {
        const uts::ReportFormat format =
            opt.format == "json" ? uts::ReportFormat::json : uts::ReportFormat::text;
        const std::string rendered = uts::emit_report(report, format);
        if (!opt.out_dir.empty()) {
            const std::filesystem::path path = std::filesystem::path(opt.out_dir) /
                                               (opt.format == "json" ? "report.json" : "report.txt");
            uts::detail::write_file_atomic(path, rendered);
            std::cout << path.string() << "\n";
        } else {
            std::cout << rendered;
        }
    } else if (command == "plot") {
        for (const std::string& path : uts::emit_plots(report, series, opt.out_dir)) {
            std::cout << path << "\n";
        }
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncertain autoregressive time series analysis"};
    app.require_subcommand(1);
    Options opt;

    const auto add_input_options = [&opt](CLI::App* cmd) {
        auto* input =
            cmd->add_option("--input", opt.input, "CSV file: one value per row, or label,value");
        auto* fixture = cmd->add_option("--fixture", opt.fixture, "built-in series name (rumor-weibo)");
        input->excludes(fixture);
        fixture->excludes(input);
    };
    const auto add_cv_options = [&opt](CLI::App* cmd) {
        cmd->add_option("--max-order", opt.max_order, "largest candidate order")
            ->capture_default_str();
        cmd->add_option("--train-len", opt.train_len, "training window length")
            ->capture_default_str();
        cmd->add_option("--cv-metric", opt.cv_metric, "one-step error metric")
            ->check(CLI::IsMember({"squared", "absolute"}))
            ->capture_default_str();
        cmd->add_option("--cv-window", opt.cv_window, "training window scheme")
            ->check(CLI::IsMember({"expanding", "rolling"}))
            ->capture_default_str();
    };
    const auto add_format_option = [&opt](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "text"}))
            ->capture_default_str();
    };
    const auto add_order_option = [&opt](CLI::App* cmd) {
        cmd->add_option("--order", opt.order, "fix the order instead of cross-validating");
    };

    CLI::App* cv = app.add_subcommand("cv", "select the model order by cross-validation");
    add_input_options(cv);
    add_cv_options(cv);
    add_format_option(cv);

    CLI::App* fit = app.add_subcommand("fit", "fit the model and estimate the disturbance");
    add_input_options(fit);
    add_cv_options(fit);
    add_order_option(fit);
    add_format_option(fit);

    CLI::App* test = app.add_subcommand("test", "run the model adequacy test");
    CLI::App* forecast =
        app.add_subcommand("forecast", "forecast the next observation with its interval");
    CLI::App* report = app.add_subcommand("report", "run the full analysis and emit the report");
    CLI::App* plot = app.add_subcommand("plot", "run the full analysis and write SVG plots");
    for (CLI::App* cmd : {test, forecast, report, plot}) {
        add_input_options(cmd);
        add_cv_options(cmd);
        add_order_option(cmd);
        add_format_option(cmd);
        cmd->add_option("--alpha", opt.alpha, "hypothesis test significance level")
            ->capture_default_str();
    }
    for (CLI::App* cmd : {forecast, report, plot}) {
        cmd->add_option("--level", opt.level, "forecast confidence level")->capture_default_str();
    }
    report->add_option("--out", opt.out_dir, "directory for the rendered report");
    plot->add_option("--out", opt.out_dir, "directory for the SVG files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cv->parsed()) return run_cv(opt);
        if (fit->parsed()) return run_fit(opt);
        if (test->parsed()) return run_test(opt);
        for (CLI::App* cmd : {forecast, report, plot}) {
            if (cmd->parsed()) return run_full(cmd->get_name(), opt);
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
