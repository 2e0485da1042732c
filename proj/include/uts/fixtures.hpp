#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "uts/time_series.hpp"

namespace uts {

/**
 * @brief Built-in example series, addressed by name.
 *
 * "rumor-weibo": cumulative retweet counts of a microblog rumor post,
 * sampled every 10 minutes from 14:10 to 2:00 the next day (72 observations).
 *
 * @throws std::invalid_argument for an unknown name
 */
[[nodiscard]] inline TimeSeries builtin_fixture(const std::string& name) {
    if (name != "rumor-weibo") {
        throw std::invalid_argument("unknown fixture \"" + name +
                                    "\": available fixtures: rumor-weibo");
    }
    static constexpr std::array<double, 72> counts = {
        78,   175,  257,  334,  392,  463,  529,  582,  628,  667,  701,  724,
        749,  788,  822,  868,  899,  933,  965,  1000, 1021, 1048, 1072, 1088,
        1112, 1123, 1132, 1147, 1158, 1170, 1186, 1197, 1210, 1222, 1235, 1243,
        1252, 1259, 1267, 1279, 1285, 1291, 1295, 1299, 1307, 1314, 1321, 1331,
        1334, 1336, 1339, 1346, 1351, 1354, 1356, 1357, 1359, 1360, 1363, 1368,
        1371, 1371, 1372, 1374, 1376, 1378, 1379, 1380, 1380, 1380, 1386, 1387};

    std::vector<double> values(counts.begin(), counts.end());
    std::vector<std::string> labels;
    labels.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::size_t minutes = 850 + 10 * i;
        const std::size_t hour = (minutes / 60) % 24;
        const std::size_t minute = minutes % 60;
        labels.push_back(std::to_string(hour) + (minute < 10 ? ":0" : ":") +
                         std::to_string(minute));
    }
    return TimeSeries(std::move(values), std::move(labels));
}

}  // namespace uts
