#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uts/normal_uncertainty.hpp"
#include "uts/uar.hpp"

namespace uts {

/**
 * @brief Outcome of the uncertainty hypothesis test for model adequacy.
 *
 * The model is rejected when strictly more than alpha * m residuals fall
 * outside the band [icdf(alpha/2), icdf(1 - alpha/2)], m being the residual
 * count.
 */
struct HypothesisTestResult {
    double alpha;
    double lower;                      ///< icdf(alpha/2)
    double upper;                      ///< icdf(1 - alpha/2)
    std::vector<std::size_t> outlier_indices; ///< t-values of residuals outside the band
    std::size_t residual_count;
    bool critical_count_exceeded;      ///< outlier count > alpha * residual_count
    bool rejected;                     ///< mirrors critical_count_exceeded

    /// Smallest outlier count that triggers rejection: floor(alpha*m) + 1.
    [[nodiscard]] std::size_t critical_count() const {
        return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(residual_count))) + 1;
    }
};

/// Error metric for cross-validation one-step prediction errors.
enum class CvMetric { squared, absolute };

/// Window scheme: `expanding` anchors the origin and grows the training set
/// by one observation per step; `rolling` slides a fixed-length window.
enum class CvWindow { expanding, rolling };

/**
 * @brief Per-order average test errors from rolling-origin cross-validation.
 */
struct CvReport {
    int max_order;
    std::size_t train_length;
    std::vector<double> ate; ///< ate[j] is the average test error of order j+1
    int chosen_order;        ///< argmin of ate, smallest order on ties
};

/// Two-sample Kolmogorov-Smirnov outcome.
struct KsResult {
    double statistic; ///< sup-distance between the empirical CDFs
    double p_value;   ///< asymptotic Kolmogorov distribution approximation
};

/// 1-based inclusive index range into a residual vector.
struct IndexRange {
    std::size_t first;
    std::size_t last;
};

/**
 * @brief Test whether N(e, sigma) is an adequate disturbance model for the residuals.
 *
 * Counts residuals strictly outside [icdf(alpha/2), icdf(1-alpha/2)] and
 * rejects when the count exceeds alpha * m. Reported indices start at
 * `first_index` (pass k+1 to obtain series t-values).
 *
 * @throws std::domain_error unless alpha lies in (0,1)
 * @throws std::invalid_argument on an empty residual vector
 */
[[nodiscard]] inline HypothesisTestResult uncertain_hypothesis_test(
    const std::vector<double>& residual_sample, const NormalUncertaintyDistribution& dist,
    double alpha, std::size_t first_index = 1) {
    detail::require_unit_open(alpha, "alpha");
    if (residual_sample.empty()) {
        throw std::invalid_argument("insufficient residuals: none supplied");
    }
    HypothesisTestResult result;
    result.alpha = alpha;
    result.lower = inverse_cdf(dist, alpha / 2.0);
    result.upper = inverse_cdf(dist, 1.0 - alpha / 2.0);
    result.residual_count = residual_sample.size();
    for (std::size_t i = 0; i < residual_sample.size(); ++i) {
        const double z = residual_sample[i];
        if (z < result.lower || z > result.upper) {
            result.outlier_indices.push_back(first_index + i);
        }
    }
    const double threshold = alpha * static_cast<double>(result.residual_count);
    result.critical_count_exceeded =
        static_cast<double>(result.outlier_indices.size()) > threshold;
    result.rejected = result.critical_count_exceeded;
    return result;
}

/**
 * @brief Select the model order by cross-validated one-step prediction error.
 *
 * For each order k = 1..max_order, train on successive windows and predict the
 * single next observation; ate[k] is the mean error over all window positions.
 * The expanding scheme starts from the first train_length observations and
 * grows the training set by one per step; the rolling scheme slides a
 * fixed-length window. Both produce n - train_length predictions. Rank-deficient
 * window fits still predict via the minimum-norm solution.
 *
 * @throws std::invalid_argument on invalid configuration
 *         (train_length <= max_order + 1 or series length <= train_length)
 */
[[nodiscard]] inline CvReport cross_validate(const TimeSeries& series, int max_order,
                                             std::size_t train_length,
                                             CvMetric metric = CvMetric::squared,
                                             CvWindow window = CvWindow::expanding) {
    const std::size_t n = series.size();
    if (max_order < 1 || train_length <= static_cast<std::size_t>(max_order) + 1 ||
        n < train_length + 1) {
        throw std::invalid_argument("invalid CV configuration");
    }
    const auto& x = series.values();
    const std::size_t positions = n - train_length;

    CvReport report;
    report.max_order = max_order;
    report.train_length = train_length;
    report.ate.reserve(static_cast<std::size_t>(max_order));

    std::vector<double> lags;
    for (int k = 1; k <= max_order; ++k) {
        double error_sum = 0.0;
        for (std::size_t p = 0; p < positions; ++p) {
            const std::size_t begin = (window == CvWindow::rolling) ? p : 0;
            const std::size_t end = p + train_length; // exclusive; predicts x[end]
            TimeSeries train(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(begin),
                                                 x.begin() + static_cast<std::ptrdiff_t>(end)));
            const UarModel model = fit(train, k);
            const DisturbanceEstimate disturbance = estimate_disturbance(residuals(train, model));

            lags.assign(static_cast<std::size_t>(k), 0.0);
            for (int i = 1; i <= k; ++i) {
                lags[static_cast<std::size_t>(i - 1)] = x[end - static_cast<std::size_t>(i)];
            }
            const double predicted = model.predict(lags) + disturbance.e_hat;
            const double err = predicted - x[end];
            error_sum += (metric == CvMetric::squared) ? err * err : std::abs(err);
        }
        report.ate.push_back(error_sum / static_cast<double>(positions));
    }

    const auto best = std::min_element(report.ate.begin(), report.ate.end());
    report.chosen_order = static_cast<int>(best - report.ate.begin()) + 1;
    return report;
}

/**
 * @brief Two-sample Kolmogorov-Smirnov test.
 *
 * statistic = sup_z |F_a(z) - F_b(z)|; the p-value uses the asymptotic
 * Kolmogorov distribution Q(lambda) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2)
 * with lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D and ne = m*n/(m+n),
 * truncating once terms fall below 1e-12.
 *
 * @throws std::invalid_argument when either sample is empty
 */
[[nodiscard]] inline KsResult ks_two_sample(std::vector<double> sample_a,
                                            std::vector<double> sample_b) {
    if (sample_a.empty() || sample_b.empty()) {
        throw std::invalid_argument("insufficient sample: both samples must be non-empty");
    }
    std::sort(sample_a.begin(), sample_a.end());
    std::sort(sample_b.begin(), sample_b.end());
    const auto m = static_cast<double>(sample_a.size());
    const auto n = static_cast<double>(sample_b.size());

    // Walk the merged order statistics, advancing each empirical CDF past
    // every tied value before comparing.
    double d_max = 0.0;
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < sample_a.size() || ib < sample_b.size()) {
        const double value = (ib >= sample_b.size())                  ? sample_a[ia]
                             : (ia >= sample_a.size())                ? sample_b[ib]
                             : std::min(sample_a[ia], sample_b[ib]);
        while (ia < sample_a.size() && sample_a[ia] == value) ++ia;
        while (ib < sample_b.size() && sample_b[ib] == value) ++ib;
        const double diff =
            std::abs(static_cast<double>(ia) / m - static_cast<double>(ib) / n);
        d_max = std::max(d_max, diff);
    }

    double p = 1.0;
    if (d_max > 0.0) {
        const double ne = m * n / (m + n);
        const double sqrt_ne = std::sqrt(ne);
        const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d_max;
        const double q = -2.0 * lambda * lambda;
        double sum = 0.0;
        double sign = 1.0;
        bool converged = false;
        for (int j = 1; j <= 1000; ++j) {
            const double term = 2.0 * std::exp(q * j * j);
            sum += sign * term;
            if (term < 1e-12) {
                converged = true;
                break;
            }
            sign = -sign;
        }
        p = converged ? std::clamp(sum, 0.0, 1.0) : 1.0;
    }
    return {d_max, p};
}

/**
 * @brief KS comparison of two slices of a residual vector.
 *
 * Default split: first floor(m/2) residuals versus the remainder. Explicit
 * 1-based inclusive ranges are used verbatim and may overlap.
 *
 * @throws std::invalid_argument on fewer than 4 residuals or an out-of-bounds range
 */
[[nodiscard]] inline KsResult split_residual_diagnostic(
    const std::vector<double>& residual_sample,
    std::optional<std::pair<IndexRange, IndexRange>> split = std::nullopt) {
    const std::size_t m = residual_sample.size();
    if (m < 4) {
        throw std::invalid_argument("insufficient residuals: need at least 4");
    }
    IndexRange a{1, m / 2};
    IndexRange b{m / 2 + 1, m};
    if (split) {
        a = split->first;
        b = split->second;
        for (const IndexRange& r : {a, b}) {
            if (r.first < 1 || r.last > m || r.first > r.last) {
                throw std::invalid_argument("invalid split: range out of bounds");
            }
        }
    }
    const auto slice = [&](const IndexRange& r) {
        return std::vector<double>(residual_sample.begin() + static_cast<std::ptrdiff_t>(r.first - 1),
                                   residual_sample.begin() + static_cast<std::ptrdiff_t>(r.last));
    };
    return ks_two_sample(slice(a), slice(b));
}

}  // namespace uts
