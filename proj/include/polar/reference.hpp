#pragma once

// Slow reference implementations used by the runtime self-test. They share no
// code with the fast paths they are compared against.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "polar/variational.hpp"

namespace polar::reference {

/// Lambda_S by scanning every realized value of g as a threshold.
inline double capital_lambda_scan(const Coefficient& g, const MaskSet& s) {
    std::vector<double> levels(g.g.values().begin(), g.g.values().end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double best = -std::numeric_limits<double>::infinity();
    for (double mu : levels) {
        double sum = 0.0;
        long count = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k] || g.g[k] >= mu) {
                sum += g.g[k];
                ++count;
            }
        }
        best = std::max(best, sum / count);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k]) sum += g.g[k];
    }
    return std::max(best, sum / static_cast<double>(s.count()));
}

/// All-pairs squared periodic distance (cell units) from every cell to a.
inline std::vector<long> squared_distance_all_pairs(const MaskSet& a) {
    const TorusGrid& g = a.grid();
    const int n = g.n();
    std::vector<long> out(g.size(), std::numeric_limits<long>::max());
    for (std::size_t p = 0; p < g.size(); ++p) {
        for (std::size_t q = 0; q < g.size(); ++q) {
            if (!a[q]) continue;
            const long dx = g.periodic_offset(static_cast<int>(p % n), static_cast<int>(q % n));
            const long dy = g.periodic_offset(static_cast<int>(p / n), static_cast<int>(q / n));
            out[p] = std::min(out[p], dx * dx + dy * dy);
        }
    }
    return out;
}

}  // namespace polar::reference
