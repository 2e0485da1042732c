#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "uts/fixtures.hpp"
#include "uts/uar.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

uts::TimeSeries exact_ar1(std::size_t n) {
    std::vector<double> x(n);
    x[0] = 0.0;
    for (std::size_t t = 1; t < n; ++t) x[t] = 10.0 + 0.5 * x[t - 1];
    return uts::TimeSeries(std::move(x));
}

double sse(const uts::TimeSeries& series, const uts::UarModel& model) {
    double total = 0.0;
    for (double r : uts::residuals(series, model)) total += r * r;
    return total;
}

// AR(1)-with-noise draws; continuous noise keeps the design full rank.
uts::TimeSeries random_series(std::mt19937& rng, std::size_t n) {
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x(n);
    x[0] = noise(rng);
    for (std::size_t t = 1; t < n; ++t) x[t] = 5.0 + 0.8 * x[t - 1] + noise(rng);
    return uts::TimeSeries(std::move(x));
}

}  // namespace

TEST_CASE("order-2 fit on the retweet series reproduces the reference coefficients") {
    const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
    const uts::UarModel model = uts::fit(series, 2);

    REQUIRE(model.order == 2);
    REQUIRE_FALSE(model.rank_deficient);
    REQUIRE(model.coefficients.size() == 2);
    REQUIRE_THAT(model.intercept, WithinAbs(50.9313, 1e-3));
    REQUIRE_THAT(model.coefficients[0], WithinAbs(1.3276, 1e-3));
    REQUIRE_THAT(model.coefficients[1], WithinAbs(-0.3641, 1e-3));

    // Full-precision regression pins, so solver drift is caught early.
    REQUIRE_THAT(model.intercept, WithinAbs(50.9313173975, 1e-6));
    REQUIRE_THAT(model.coefficients[0], WithinAbs(1.3276430025, 1e-8));
    REQUIRE_THAT(model.coefficients[1], WithinAbs(-0.3640523801, 1e-8));
}

TEST_CASE("noiseless AR(1) recurrence is recovered exactly") {
    const uts::TimeSeries series = exact_ar1(20);
    const uts::UarModel model = uts::fit(series, 1);

    REQUIRE_FALSE(model.rank_deficient);
    REQUIRE_THAT(model.intercept, WithinAbs(10.0, 1e-7));
    REQUIRE_THAT(model.coefficients[0], WithinAbs(0.5, 1e-9));
    REQUIRE(sse(series, model) < 1e-12);

    for (double r : uts::residuals(series, model)) {
        REQUIRE_THAT(r, WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("constant series is fit perfectly through the minimum-norm solution") {
    const uts::TimeSeries series(std::vector<double>(12, 7.5));
    const uts::UarModel model = uts::fit(series, 1);

    REQUIRE(model.rank_deficient);
    for (double r : uts::residuals(series, model)) {
        REQUIRE_THAT(r, WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("residuals") {
    SECTION("identity model turns residuals into first differences") {
        const uts::TimeSeries series(std::vector<double>{3.0, 7.0, 6.5, 10.25, 9.0});
        const uts::UarModel walk{1, 0.0, {1.0}, false};
        const std::vector<double> r = uts::residuals(series, walk);
        REQUIRE(r.size() == 4);
        for (std::size_t i = 0; i < r.size(); ++i) {
            REQUIRE(r[i] == series[i + 1] - series[i]);
        }
    }

    SECTION("retweet series leaves 70 residuals with 3 outside the adequacy band") {
        const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
        const std::vector<double> r = uts::residuals(series, uts::fit(series, 2));
        REQUIRE(r.size() == 70);

        int outside = 0;
        for (double v : r) {
            if (v < -9.1774 || v > 9.1774) ++outside;
        }
        REQUIRE(outside == 3);

        REQUIRE_THAT(r[3], WithinAbs(13.226121, 1e-5));
        REQUIRE_THAT(r[9], WithinAbs(-14.786125, 1e-5));
        REQUIRE_THAT(r[13], WithinAbs(12.619410, 1e-5));
    }

    SECTION("length is always n - k") {
        const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
        for (int k : {1, 2, 3, 7}) {
            REQUIRE(uts::residuals(series, uts::fit(series, k)).size() == series.size() - k);
        }
    }
}

TEST_CASE("disturbance estimation") {
    SECTION("two-point symmetric sample") {
        const uts::DisturbanceEstimate d = uts::estimate_disturbance({-1.0, 1.0});
        REQUIRE(d.e_hat == 0.0);
        REQUIRE(d.sigma_hat == 1.0);
        REQUIRE(d.count == 2);
    }

    SECTION("fitted retweet residuals have mean zero and the reference scale") {
        const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
        const std::vector<double> r = uts::residuals(series, uts::fit(series, 2));
        const uts::DisturbanceEstimate d = uts::estimate_disturbance(r);

        REQUIRE(d.count == 70);
        REQUIRE_THAT(d.e_hat, WithinAbs(0.0, 1e-8));
        REQUIRE_THAT(d.sigma_hat, WithinAbs(4.5436533504, 1e-6));
        REQUIRE_THAT(d.sigma_hat, WithinAbs(4.5437, 1e-3));
    }
}

TEST_CASE("one-step forecast") {
    const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");

    SECTION("from the full-precision fit") {
        const uts::UarModel model = uts::fit(series, 2);
        const uts::DisturbanceEstimate d =
            uts::estimate_disturbance(uts::residuals(series, model));
        const uts::ForecastResult fc = uts::forecast(series, model, d, 0.95);

        REQUIRE_THAT(fc.point, WithinAbs(1387.79556309, 1e-6));
        REQUIRE(fc.point == uts::expected_value(fc.distribution));
        REQUIRE(fc.level == 0.95);
        REQUIRE_THAT(fc.interval.lower, WithinAbs(1378.618168, 1e-5));
        REQUIRE_THAT(fc.interval.upper, WithinAbs(1396.972959, 1e-5));
        REQUIRE_THAT(fc.interval.midpoint(), WithinAbs(fc.point, 1e-9));
    }

    SECTION("from the rounded reference model and disturbance") {
        const uts::UarModel model{2, 50.9313, {1.3276, -0.3641}, false};
        const uts::DisturbanceEstimate d{0.0, 4.5437, 70};
        const uts::ForecastResult fc = uts::forecast(series, model, d, 0.95);

        REQUIRE_THAT(fc.point, WithinAbs(1387.6699, 1e-9));
        REQUIRE(std::round(fc.point) == 1388.0);
        REQUIRE_THAT(fc.interval.width() / 2.0, WithinAbs(9.177489737707143, 1e-9));
    }

    SECTION("random-walk model forecasts the last observation") {
        const uts::UarModel walk{1, 0.0, {1.0}, false};
        const uts::DisturbanceEstimate d{0.0, 2.0, 10};
        const uts::ForecastResult fc = uts::forecast(series, walk, d, 0.9);
        REQUIRE(fc.point == series[series.size() - 1]);
    }

    SECTION("exact recurrence predicts its own next term") {
        const uts::TimeSeries ar = exact_ar1(20);
        const uts::UarModel model = uts::fit(ar, 1);
        const uts::DisturbanceEstimate unit{0.0, 1.0, 19};
        const uts::ForecastResult fc = uts::forecast(ar, model, unit, 0.95);
        REQUIRE_THAT(fc.point, WithinAbs(10.0 + 0.5 * ar[19], 1e-9));
    }
}

TEST_CASE("fitted residuals sum to zero on random full-rank designs") {
    std::mt19937 rng(20240817u);
    for (int trial = 0; trial < 50; ++trial) {
        const uts::TimeSeries series = random_series(rng, 40);
        const int k = 1 + trial % 4;
        const uts::UarModel model = uts::fit(series, k);
        REQUIRE_FALSE(model.rank_deficient);

        double sum = 0.0;
        double max_abs = 0.0;
        for (double v : series.values()) max_abs = std::max(max_abs, std::abs(v));
        for (double r : uts::residuals(series, model)) sum += r;
        REQUIRE(std::abs(sum) <= 1e-6 * static_cast<double>(series.size() - k) * max_abs);
    }
}

TEST_CASE("least-squares fit is optimal under single-coefficient perturbations") {
    const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
    const uts::UarModel model = uts::fit(series, 2);
    const double best = sse(series, model);

    std::mt19937 rng(7u);
    std::uniform_int_distribution<int> pick(0, 2);
    std::bernoulli_distribution flip(0.5);
    for (int trial = 0; trial < 120; ++trial) {
        uts::UarModel perturbed = model;
        const double delta = flip(rng) ? 1e-3 : -1e-3;
        const int which = pick(rng);
        if (which == 0) {
            perturbed.intercept += delta;
        } else {
            perturbed.coefficients[which - 1] += delta;
        }
        REQUIRE(sse(series, perturbed) >= best - 1e-9);
    }
}

TEST_CASE("fit is shift equivariant") {
    const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
    const double c = 100.0;
    std::vector<double> shifted_values = series.values();
    for (double& v : shifted_values) v += c;
    const uts::TimeSeries shifted(std::move(shifted_values));

    const uts::UarModel base = uts::fit(series, 2);
    const uts::UarModel moved = uts::fit(shifted, 2);

    double coef_sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        REQUIRE_THAT(moved.coefficients[i], WithinAbs(base.coefficients[i], 1e-8));
        coef_sum += base.coefficients[i];
    }
    REQUIRE_THAT(moved.intercept, WithinAbs(base.intercept + c * (1.0 - coef_sum), 1e-6));
}

TEST_CASE("model operations reject invalid inputs") {
    const uts::TimeSeries series = uts::builtin_fixture("rumor-weibo");
    const uts::TimeSeries tiny(std::vector<double>{1.0, 2.0});

    REQUIRE_THROWS_AS(uts::fit(series, 0), std::invalid_argument);
    REQUIRE_THROWS_WITH(uts::fit(series, 0), ContainsSubstring("invalid order"));
    REQUIRE_THROWS_AS(uts::fit(tiny, 1), std::invalid_argument);
    REQUIRE_THROWS_WITH(uts::fit(tiny, 1), ContainsSubstring("insufficient observations"));

    const uts::UarModel wide{3, 0.0, {1.0, 0.0, 0.0}, false};
    REQUIRE_THROWS_WITH(uts::residuals(tiny, wide), ContainsSubstring("insufficient observations"));

    REQUIRE_THROWS_WITH(uts::estimate_disturbance({1.0}), ContainsSubstring("insufficient residuals"));

    const uts::UarModel model = uts::fit(series, 2);
    const uts::DisturbanceEstimate d{0.0, 4.5437, 70};
    REQUIRE_THROWS_AS(uts::forecast(series, model, d, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(uts::forecast(series, model, d, 1.0), std::domain_error);

    const uts::DisturbanceEstimate degenerate{0.0, 0.0, 70};
    REQUIRE_THROWS_WITH(uts::forecast(series, model, degenerate, 0.95),
                        ContainsSubstring("degenerate distribution"));
}
