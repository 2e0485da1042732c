#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uts/time_series.hpp"

namespace uts {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

inline double parse_value(const std::string& token, std::size_t line_number) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw std::runtime_error("parse error at line " + std::to_string(line_number) +
                                 ": expected a number, got \"" + token + "\"");
    }
    if (consumed != token.size()) {
        throw std::runtime_error("parse error at line " + std::to_string(line_number) +
                                 ": trailing characters in \"" + token + "\"");
    }
    return value;
}

}  // namespace detail

/**
 * @brief Read a time series from a stream of CSV rows.
 *
 * Each data row is either a bare value or "label,value". Blank lines are
 * skipped; '#' starts a comment that runs to the end of the line. Rows must
 * be uniformly labeled or uniformly bare.
 *
 * @throws std::runtime_error on malformed rows (message cites the 1-based line)
 * @throws std::invalid_argument when no observations remain
 */
[[nodiscard]] inline TimeSeries load_series(std::istream& in) {
    std::vector<double> values;
    std::vector<std::string> labels;
    bool saw_labeled = false;
    bool saw_bare = false;

    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        if (const std::size_t hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;

        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            if (saw_labeled) {
                throw std::runtime_error("parse error at line " + std::to_string(line_number) +
                                         ": unlabeled row in a labeled series");
            }
            saw_bare = true;
            values.push_back(detail::parse_value(line, line_number));
        } else {
            if (saw_bare) {
                throw std::runtime_error("parse error at line " + std::to_string(line_number) +
                                         ": labeled row in an unlabeled series");
            }
            saw_labeled = true;
            labels.push_back(detail::trim(line.substr(0, comma)));
            values.push_back(detail::parse_value(detail::trim(line.substr(comma + 1)), line_number));
        }
    }

    if (values.empty()) {
        throw std::invalid_argument("invalid series: no observations");
    }
    return TimeSeries(std::move(values), std::move(labels));
}

/// Read a time series from a CSV file. @throws std::runtime_error if unreadable.
[[nodiscard]] inline TimeSeries load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return load_series(in);
}

}  // namespace uts
