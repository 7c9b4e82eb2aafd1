#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "polar/torus_grid.hpp"

namespace polar {

// Distances are periodic Euclidean distances between cell centers. They are
// computed exactly as integer squared offsets (in cell units) and converted
// to torus units only on output, so every threshold comparison below is
// decided on integers.

namespace detail {

inline constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

/// Squared distance (cell units) from every cell to the nearest cell of a.
/// Cells of a get 0. Requires a nonempty.
inline std::vector<std::int64_t> squared_cell_distance(const MaskSet& a) {
    const TorusGrid& g = a.grid();
    const int n = g.n();
    std::vector<std::int64_t> row_dist(g.size(), kFar);

    // Pass 1: nearest member within each row (ring sweep in both directions).
    std::vector<int> fwd(n), bwd(n);
    for (int j = 0; j < n; ++j) {
        int first = -1;
        for (int i = 0; i < n; ++i) {
            if (a.at(i, j)) {
                first = i;
                break;
            }
        }
        if (first < 0) continue;
        int last_seen = 0;
        for (int k = 0; k < n; ++k) {
            const int i = (first + k) % n;
            if (a.at(i, j)) last_seen = 0; else ++last_seen;
            fwd[i] = last_seen;
        }
        last_seen = 0;
        for (int k = 0; k < n; ++k) {
            const int i = ((first - k) % n + n) % n;
            if (a.at(i, j)) last_seen = 0; else ++last_seen;
            bwd[i] = last_seen;
        }
        for (int i = 0; i < n; ++i) {
            const std::int64_t d = std::min(fwd[i], bwd[i]);
            row_dist[g.index(i, j)] = d * d;
        }
    }

    // Pass 2: combine rows along each column.
    std::vector<std::int64_t> out(g.size(), kFar);
    std::vector<std::int64_t> column(n);
    for (int i = 0; i < n; ++i) {
        for (int b = 0; b < n; ++b) column[b] = row_dist[g.index(i, b)];
        for (int j = 0; j < n; ++j) {
            std::int64_t best = kFar;
            for (int b = 0; b < n; ++b) {
                if (column[b] >= kFar) continue;
                const std::int64_t dy = g.periodic_offset(j, b);
                best = std::min(best, column[b] + dy * dy);
            }
            out[g.index(i, j)] = best;
        }
    }
    return out;
}

inline std::vector<std::int64_t> checked_squared_distance(const MaskSet& a, const char* what) {
    if (a.empty()) throw Error(ErrorCode::EmptyMask, std::string(what) + " of an empty set");
    return squared_cell_distance(a);
}

/// (delta / h)^2 in cell units. The 1e-9 slack absorbs rounding in delta * n;
/// realized squared distances are integers, so it never changes membership.
inline double radius_squared_cells(const TorusGrid& g, double delta) {
    const double r = delta * g.n();
    return r * r;
}

}  // namespace detail

/// Periodic Euclidean distance from each cell center to the nearest center in a.
inline ScalarField distance_to(const MaskSet& a) {
    const auto d2 = detail::checked_squared_distance(a, "distance_to");
    ScalarField out(a.grid());
    const double h = a.grid().h();
    for (std::size_t k = 0; k < d2.size(); ++k) out[k] = h * std::sqrt(static_cast<double>(d2[k]));
    return out;
}

/// A_{+delta} = {d(., A) <= delta}.
inline MaskSet dilate(const MaskSet& a, double delta) {
    if (delta < 0.0) throw Error(ErrorCode::InvalidArgument, "dilate with delta < 0");
    const auto d2 = detail::checked_squared_distance(a, "dilate");
    const double r2 = detail::radius_squared_cells(a.grid(), delta) + 1e-9;
    MaskSet out(a.grid());
    for (std::size_t k = 0; k < d2.size(); ++k) out.set(k, static_cast<double>(d2[k]) <= r2);
    return out;
}

/// A_{-delta} = {d(., A^c) >= delta} intersected with A (which only matters at
/// delta = 0, where it makes erode(A, 0) = A). The whole torus when A^c is empty.
inline MaskSet erode(const MaskSet& a, double delta) {
    if (delta < 0.0) throw Error(ErrorCode::InvalidArgument, "erode with delta < 0");
    if (a.full() || a.empty()) return a;
    const auto d2 = detail::squared_cell_distance(a.complement());
    const double r2 = detail::radius_squared_cells(a.grid(), delta) - 1e-9;
    MaskSet out(a.grid());
    for (std::size_t k = 0; k < d2.size(); ++k) out.set(k, a[k] && static_cast<double>(d2[k]) >= r2);
    return out;
}

/// sup over a of d(., b).
inline double excess(const MaskSet& a, const MaskSet& b) {
    require_same_grid(a.grid(), b.grid());
    if (a.empty()) throw Error(ErrorCode::EmptyMask, "excess of an empty set");
    const auto d2 = detail::checked_squared_distance(b, "excess");
    std::int64_t worst = 0;
    for (std::size_t k = 0; k < d2.size(); ++k) {
        if (a[k]) worst = std::max(worst, d2[k]);
    }
    return a.grid().h() * std::sqrt(static_cast<double>(worst));
}

inline double hausdorff(const MaskSet& a, const MaskSet& b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyMask, "hausdorff of an empty set");
    return std::max(excess(a, b), excess(b, a));
}

/// d(a, b) = min over pairs of cell-center distances.
inline double set_distance(const MaskSet& a, const MaskSet& b) {
    require_same_grid(a.grid(), b.grid());
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    const auto d2 = detail::squared_cell_distance(b);
    std::int64_t best = detail::kFar;
    for (std::size_t k = 0; k < d2.size(); ++k) {
        if (a[k]) best = std::min(best, d2[k]);
    }
    return a.grid().h() * std::sqrt(static_cast<double>(best));
}

/// |A_{+delta} \ A_{-delta}|; tends to 0 with delta exactly for regular sets.
inline double boundary_annulus_area(const MaskSet& a, double delta) {
    if (a.empty() || a.full()) {
        throw Error(ErrorCode::EmptyMask, "boundary_annulus_area needs A and its complement nonempty");
    }
    return dilate(a, delta).area() - erode(a, delta).area();
}

/// Radii bracketing a superlevel set of a sampled function f:
///   erode({f > 0}, inner) subset {f >= r} subset erode({f > 0}, outer).
struct LevelSetRadii {
    double inner;  ///< smallest realized radius whose erosion lies in {f >= r}
    double outer;  ///< d({f >= r}, {f <= 0}); +inf when {f >= r} is empty
};

inline LevelSetRadii level_set_radii(const ScalarField& f, double r) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "level_set_radii needs r > 0");
    const MaskSet pos = MaskSet::positive(f);
    const MaskSet nonpos = pos.complement();
    if (pos.empty() || nonpos.empty()) {
        throw Error(ErrorCode::EmptyMask, "level_set_radii needs {f>0} and {f<=0} nonempty");
    }
    const MaskSet upper = MaskSet::where(f, [r](double v) { return v >= r; });
    const auto d2 = detail::squared_cell_distance(nonpos);
    const double h = f.grid().h();

    LevelSetRadii out{};
    out.outer = std::numeric_limits<double>::infinity();
    if (!upper.empty()) {
        std::int64_t best = detail::kFar;
        for (std::size_t k = 0; k < d2.size(); ++k) {
            if (upper[k]) best = std::min(best, d2[k]);
        }
        out.outer = h * std::sqrt(static_cast<double>(best));
    }

    // m(delta) = min{f : d(., {f<=0}) >= delta} is non-decreasing in delta; scan
    // the realized squared radii from the outermost inwards.
    std::vector<std::pair<std::int64_t, double>> cells;
    cells.reserve(pos.count());
    for (std::size_t k = 0; k < d2.size(); ++k) {
        if (pos[k]) cells.emplace_back(d2[k], f[k]);
    }
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::int64_t answer = cells.front().first;
    double running_min = std::numeric_limits<double>::infinity();
    bool found = false;
    std::size_t k = 0;
    while (k < cells.size()) {
        const std::int64_t level = cells[k].first;
        while (k < cells.size() && cells[k].first == level) {
            running_min = std::min(running_min, cells[k].second);
            ++k;
        }
        if (running_min >= r) {
            answer = level;
            found = true;
        } else {
            break;
        }
    }
    out.inner = found ? h * std::sqrt(static_cast<double>(answer))
                      : h * std::sqrt(static_cast<double>(cells.front().first)) + h;
    return out;
}

}  // namespace polar
