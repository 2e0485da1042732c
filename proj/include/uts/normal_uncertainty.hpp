#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uts {

/**
 * @brief Closed interval [lower, upper] on the real line.
 */
struct Interval {
    double lower;
    double upper;

    [[nodiscard]] double width() const { return upper - lower; }
    [[nodiscard]] double midpoint() const { return 0.5 * (lower + upper); }
};

/**
 * @brief Normal uncertainty distribution N(e, sigma).
 *
 * The distribution with CDF
 *
 *   psi(z) = (1 + exp(pi * (e - z) / (sqrt(3) * sigma)))^(-1),
 *
 * parameterized by its expected value e and dispersion sigma. A degenerate
 * sigma <= 0 is rejected at construction: the CDF would collapse to a step
 * function and its inverse would be undefined.
 */
class NormalUncertaintyDistribution {
public:
    NormalUncertaintyDistribution(double e, double sigma) : e_(e), sigma_(sigma) {
        if (!std::isfinite(e) || !std::isfinite(sigma)) {
            throw std::invalid_argument("degenerate distribution: parameters must be finite");
        }
        if (sigma <= 0.0) {
            throw std::invalid_argument("degenerate distribution: sigma must be positive");
        }
    }

    [[nodiscard]] double e() const { return e_; }
    [[nodiscard]] double sigma() const { return sigma_; }

private:
    double e_;
    double sigma_;
};

namespace detail {

// pi / sqrt(3), the scale constant of the normal uncertainty CDF.
inline constexpr double pi_over_sqrt3 = std::numbers::pi / std::numbers::sqrt3;
inline constexpr double sqrt3_over_pi = std::numbers::sqrt3 / std::numbers::pi;

// Largest exponent fed to std::exp; beyond this the CDF saturates to 0/1
// instead of overflowing to NaN territory.
inline constexpr double max_exp_arg = 700.0;

inline void require_unit_open(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0)) {
        throw std::domain_error(std::string(name) + " must lie in (0,1)");
    }
}

}  // namespace detail

/**
 * @brief Uncertainty distribution function psi(z) of N(e, sigma).
 *
 * Strictly increasing in z, with psi(e) = 1/2. Saturates to 0/1 at the
 * extremes of double range rather than producing NaN.
 */
[[nodiscard]] inline double cdf(const NormalUncertaintyDistribution& dist, double z) {
    double arg = detail::pi_over_sqrt3 * (dist.e() - z) / dist.sigma();
    if (arg > detail::max_exp_arg) arg = detail::max_exp_arg;
    if (arg < -detail::max_exp_arg) arg = -detail::max_exp_arg;
    return 1.0 / (1.0 + std::exp(arg));
}

/**
 * @brief Quantile function: the z with cdf(z) = alpha.
 *
 *   icdf(alpha) = e + (sigma * sqrt(3) / pi) * ln(alpha / (1 - alpha))
 *
 * @throws std::domain_error unless alpha lies strictly in (0,1).
 */
[[nodiscard]] inline double inverse_cdf(const NormalUncertaintyDistribution& dist, double alpha) {
    detail::require_unit_open(alpha, "alpha");
    return dist.e() + dist.sigma() * detail::sqrt3_over_pi * std::log(alpha / (1.0 - alpha));
}

/**
 * @brief Minimum-width interval [a, b] with psi(b) - psi(a) >= alpha.
 *
 * Symmetric about e with half-width (sigma * sqrt(3) / pi) * ln((1+alpha)/(1-alpha)).
 * Centered on the exact e; any display rounding is a presentation concern.
 *
 * @throws std::domain_error unless alpha lies strictly in (0,1).
 */
[[nodiscard]] inline Interval confidence_interval(const NormalUncertaintyDistribution& dist,
                                                  double alpha) {
    detail::require_unit_open(alpha, "alpha");
    const double half_width =
        dist.sigma() * detail::sqrt3_over_pi * std::log((1.0 + alpha) / (1.0 - alpha));
    return {dist.e() - half_width, dist.e() + half_width};
}

/// Expected value of the distribution (the e parameter).
[[nodiscard]] inline double expected_value(const NormalUncertaintyDistribution& dist) {
    return dist.e();
}

}  // namespace uts
