#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "uts/normal_uncertainty.hpp"
#include "uts/time_series.hpp"

namespace uts {

/**
 * @brief Autoregressive model X_t = a0 + sum_i a_i * X_{t-i} + disturbance.
 */
struct UarModel {
    int order;                        ///< number of lags k
    double intercept;                 ///< a0
    std::vector<double> coefficients; ///< a_1..a_k, coefficients[i-1] multiplies X_{t-i}
    bool rank_deficient = false;      ///< set when the design matrix lost rank and the
                                      ///< minimum-norm solution was returned

    /// One-step prediction a0 + sum_i a_i * lags[i-1], where lags[0] is X_{t-1}.
    [[nodiscard]] double predict(const std::vector<double>& lags) const {
        double value = intercept;
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            value += coefficients[i] * lags[i];
        }
        return value;
    }
};

/**
 * @brief Sample moments of the residuals, used as the disturbance estimate.
 */
struct DisturbanceEstimate {
    double e_hat;      ///< sample mean of the residuals
    double sigma_hat;  ///< sqrt of the mean squared deviation (divisor = count)
    std::size_t count; ///< number of residuals (n - k)
};

/**
 * @brief One-step-ahead forecast: predicted distribution, point value, interval.
 */
struct ForecastResult {
    NormalUncertaintyDistribution distribution; ///< N(mu_hat, sigma_hat)
    double point;                               ///< mu_hat, equals distribution.e()
    Interval interval;                          ///< confidence interval at `level`
    double level;                               ///< confidence level in (0,1)
};

/**
 * @brief Least-squares fit of an order-k autoregressive model.
 *
 * Minimizes sum_{t=k+1..n} (X_t - a0 - sum_i a_i X_{t-i})^2 over
 * (a0, a1..ak) via a complete orthogonal decomposition of the design
 * matrix. A rank-deficient design (constant series, exact arithmetic
 * progressions) yields the minimum-norm solution with rank_deficient set.
 *
 * @throws std::invalid_argument when the series has fewer than k+2 observations
 */
[[nodiscard]] inline UarModel fit(const TimeSeries& series, int order) {
    if (order < 1) {
        throw std::invalid_argument("invalid order: must be >= 1");
    }
    const std::size_t n = series.size();
    const auto k = static_cast<std::size_t>(order);
    if (n < k + 2) {
        throw std::invalid_argument("insufficient observations: need at least k+2");
    }

    const auto rows = static_cast<Eigen::Index>(n - k);
    const auto cols = static_cast<Eigen::Index>(k + 1);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    const auto& x = series.values();
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = k + static_cast<std::size_t>(r); // 0-based index of X_t
        target(r) = x[t];
        design(r, 0) = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            design(r, static_cast<Eigen::Index>(i)) = x[t - i];
        }
    }

    const auto decomposition = design.completeOrthogonalDecomposition();
    const Eigen::VectorXd solution = decomposition.solve(target);

    UarModel model;
    model.order = order;
    model.intercept = solution(0);
    model.coefficients.assign(solution.data() + 1, solution.data() + cols);
    model.rank_deficient = decomposition.rank() < cols;
    return model;
}

/**
 * @brief Residuals eps_t = X_t - a0 - sum_i a_i X_{t-i} for t = k+1..n.
 *
 * @return n - k residuals in index order
 * @throws std::invalid_argument when the series is not longer than the order
 */
[[nodiscard]] inline std::vector<double> residuals(const TimeSeries& series,
                                                   const UarModel& model) {
    const std::size_t n = series.size();
    const auto k = static_cast<std::size_t>(model.order);
    if (n <= k) {
        throw std::invalid_argument("insufficient observations: series not longer than order");
    }
    const auto& x = series.values();
    std::vector<double> result(n - k);
    for (std::size_t t = k; t < n; ++t) {
        double predicted = model.intercept;
        for (std::size_t i = 1; i <= k; ++i) {
            predicted += model.coefficients[i - 1] * x[t - i];
        }
        result[t - k] = x[t] - predicted;
    }
    return result;
}

/**
 * @brief Disturbance moments from a residual sample.
 *
 * e_hat is the sample mean, sigma_hat the square root of the mean squared
 * deviation with divisor equal to the residual count.
 *
 * @throws std::invalid_argument with fewer than 2 residuals
 */
[[nodiscard]] inline DisturbanceEstimate estimate_disturbance(
    const std::vector<double>& residual_sample) {
    const std::size_t m = residual_sample.size();
    if (m < 2) {
        throw std::invalid_argument("insufficient residuals: need at least 2");
    }
    const double mean =
        std::accumulate(residual_sample.begin(), residual_sample.end(), 0.0) / static_cast<double>(m);
    double sum_sq = 0.0;
    for (double r : residual_sample) {
        const double d = r - mean;
        sum_sq += d * d;
    }
    return {mean, std::sqrt(sum_sq / static_cast<double>(m)), m};
}

/**
 * @brief One-step-ahead forecast of X_{n+1}.
 *
 * The predicted value is mu_hat = a0 + sum_i a_i X_{n+1-i} + e_hat; the
 * predicted uncertain variable is N(mu_hat, sigma_hat) and the interval is
 * its confidence interval at `level`.
 *
 * @throws std::domain_error unless level lies in (0,1)
 * @throws std::invalid_argument when the series is shorter than the order,
 *         or the disturbance is degenerate (sigma_hat <= 0)
 */
[[nodiscard]] inline ForecastResult forecast(const TimeSeries& series, const UarModel& model,
                                             const DisturbanceEstimate& disturbance,
                                             double level) {
    detail::require_unit_open(level, "level");
    const std::size_t n = series.size();
    const auto k = static_cast<std::size_t>(model.order);
    if (n < k) {
        throw std::invalid_argument("insufficient observations: series shorter than order");
    }
    const auto& x = series.values();
    double mu = model.intercept + disturbance.e_hat;
    for (std::size_t i = 1; i <= k; ++i) {
        mu += model.coefficients[i - 1] * x[n - i];
    }
    NormalUncertaintyDistribution predicted(mu, disturbance.sigma_hat);
    return {predicted, mu, confidence_interval(predicted, level), level};
}

}  // namespace uts
