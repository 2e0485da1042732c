#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uts {

/**
 * @brief Ordered sequence of real-valued observations X_1 ... X_n.
 *
 * Labels, when present, are display metadata only (e.g. clock times such as
 * "14:10"); all arithmetic uses the integer index t = 1..n.
 */
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::vector<std::string> labels = {})
        : values_(std::move(values)), labels_(std::move(labels)) {
        if (values_.empty()) {
            throw std::invalid_argument("invalid series: no observations");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("invalid series: non-finite value");
            }
        }
        if (!labels_.empty() && labels_.size() != values_.size()) {
            throw std::invalid_argument("invalid series: labels length mismatch");
        }
    }

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] bool has_labels() const { return !labels_.empty(); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

    /// Observation X_t by 0-based position.
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// True when every observation is an integer (a count series).
    [[nodiscard]] bool integer_valued() const {
        for (double v : values_) {
            if (v != std::floor(v)) return false;
        }
        return true;
    }

private:
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

}  // namespace uts
