#pragma once

// Peak finding on one-dimensional sweep profiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qvdp/errors.hpp"

namespace qvdp {

struct Peak {
    std::size_t index = 0;
    double value = 0.0;
    double prominence = 0.0;
    double threshold = 0.0; // prominence needed to count
};

// Local maxima whose topographic prominence exceeds `n_sigma` combined standard
// errors of the peak and its key col, plus an absolute floor. `se` may be empty
// for noiseless data. Flat tops count once, at their left end; maxima on the
// boundary are not peaks.
inline std::vector<Peak> find_peaks(const std::vector<double>& y, const std::vector<double>& se = {},
                                    double n_sigma = 3.0, double floor = 1e-12) {
    if (!se.empty() && se.size() != y.size()) throw DimensionMismatch("find_peaks: se size differs from data size");
    const std::size_t n = y.size();
    auto err = [&](std::size_t i) { return se.empty() ? 0.0 : se[i]; };
    std::vector<Peak> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && y[i - 1] >= y[i]) continue;
        std::size_t j = i;
        while (j + 1 < n && y[j + 1] == y[i]) ++j;
        if (j + 1 < n && y[j + 1] > y[i]) continue;

        if (i == 0 || j + 1 == n) {
            i = j;
            continue;
        }
        // Lowest point on each side before the terrain rises above the peak;
        // the key col is the higher of the two.
        std::size_t left_col = i;
        for (std::size_t k = i; k-- > 0 && y[k] <= y[i];)
            if (y[k] < y[left_col]) left_col = k;
        std::size_t right_col = j;
        for (std::size_t k = j + 1; k < n && y[k] <= y[i]; ++k)
            if (y[k] < y[right_col]) right_col = k;
        const std::size_t col = y[left_col] > y[right_col] ? left_col : right_col;
        Peak p;
        p.index = i;
        p.value = y[i];
        p.prominence = y[i] - y[col];
        p.threshold = std::max(floor, n_sigma * std::hypot(err(i), err(col)));
        if (p.prominence > p.threshold) peaks.push_back(p);
        i = j;
    }
    return peaks;
}

} // namespace qvdp
