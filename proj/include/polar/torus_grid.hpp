#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "polar/error.hpp"

namespace polar {

/**
 * N x N cell-centered discretization of the flat unit 2-torus.
 *
 * Cell (i, j) has center ((i + 1/2) h, (j + 1/2) h) with i the x index and
 * j the y index. Storage is row-major: index = j * n + i. Total area is 1.
 */
class TorusGrid {
public:
    static constexpr int kMinCells = 8;

    explicit TorusGrid(int n) : n_(n) {
        if (n < kMinCells) {
            throw Error(ErrorCode::InvalidArgument,
                        "TorusGrid needs n >= 8, got " + std::to_string(n));
        }
    }

    int n() const noexcept { return n_; }
    double h() const noexcept { return 1.0 / n_; }
    double cell_area() const noexcept { return 1.0 / (static_cast<double>(n_) * n_); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(wrap(j)) * n_ + wrap(i);
    }
    int col(std::size_t idx) const noexcept { return static_cast<int>(idx % n_); }
    int row(std::size_t idx) const noexcept { return static_cast<int>(idx / n_); }

    double x(int i) const noexcept { return (i + 0.5) * h(); }
    double y(int j) const noexcept { return (j + 0.5) * h(); }

    int wrap(int k) const noexcept {
        int r = k % n_;
        return r < 0 ? r + n_ : r;
    }

    /// Periodic index offset min(|a-b|, n-|a-b|).
    int periodic_offset(int a, int b) const noexcept {
        int d = std::abs(a - b) % n_;
        return std::min(d, n_ - d);
    }

    friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept { return a.n_ == b.n_; }

private:
    int n_;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
    if (!(a == b)) {
        throw Error(ErrorCode::GridMismatch, "grids differ: n=" + std::to_string(a.n()) +
                                                 " vs n=" + std::to_string(b.n()));
    }
}

/// Real grid function; each cell carries integration weight h^2.
class ScalarField {
public:
    explicit ScalarField(TorusGrid grid, double value = 0.0)
        : grid_(grid), values_(grid.size(), value) {}

    ScalarField(TorusGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw Error(ErrorCode::InvalidArgument, "ScalarField value count does not match grid");
        }
    }

    /// Samples f(x, y) at cell centers.
    static ScalarField sample(TorusGrid grid, const std::function<double(double, double)>& f) {
        ScalarField out(grid);
        for (int j = 0; j < grid.n(); ++j) {
            for (int i = 0; i < grid.n(); ++i) {
                out.values_[grid.index(i, j)] = f(grid.x(i), grid.y(j));
            }
        }
        return out;
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& at(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double at(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double min() const { return *std::min_element(values_.begin(), values_.end()); }
    double max() const { return *std::max_element(values_.begin(), values_.end()); }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    ScalarField& operator+=(const ScalarField& o) {
        require_same_grid(grid_, o.grid_);
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        require_same_grid(grid_, o.grid_);
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
        return *this;
    }
    ScalarField& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
    TorusGrid grid_;
    std::vector<double> values_;
};

/// Boolean subset of cells (a union of closed cells) with area h^2 * count.
class MaskSet {
public:
    explicit MaskSet(TorusGrid grid, bool value = false)
        : grid_(grid), bits_(grid.size(), value ? 1 : 0), count_(value ? grid.size() : 0) {}

    MaskSet(TorusGrid grid, std::vector<std::uint8_t> bits) : grid_(grid), bits_(std::move(bits)) {
        if (bits_.size() != grid_.size()) {
            throw Error(ErrorCode::InvalidArgument, "MaskSet bit count does not match grid");
        }
        for (auto& b : bits_) b = b ? 1 : 0;
        recount();
    }

    /// {k : pred(f[k])}
    template <typename Pred>
    static MaskSet where(const ScalarField& f, Pred pred) {
        MaskSet out(f.grid());
        for (std::size_t k = 0; k < f.size(); ++k) out.bits_[k] = pred(f[k]) ? 1 : 0;
        out.recount();
        return out;
    }

    static MaskSet positive(const ScalarField& f) {
        return where(f, [](double v) { return v > 0.0; });
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t count() const noexcept { return count_; }
    double area() const noexcept { return static_cast<double>(count_) * grid_.cell_area(); }
    bool empty() const noexcept { return count_ == 0; }
    bool full() const noexcept { return count_ == bits_.size(); }

    bool operator[](std::size_t k) const noexcept { return bits_[k] != 0; }
    bool at(int i, int j) const noexcept { return bits_[grid_.index(i, j)] != 0; }

    void set(std::size_t k, bool v) noexcept {
        if ((bits_[k] != 0) != v) {
            bits_[k] = v ? 1 : 0;
            count_ = v ? count_ + 1 : count_ - 1;
        }
    }
    void set(int i, int j, bool v) noexcept { set(grid_.index(i, j), v); }

    MaskSet complement() const {
        MaskSet out(grid_);
        for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] = bits_[k] ? 0 : 1;
        out.count_ = bits_.size() - count_;
        return out;
    }

    bool subset_of(const MaskSet& o) const {
        require_same_grid(grid_, o.grid_);
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (bits_[k] && !o.bits_[k]) return false;
        }
        return true;
    }

    friend MaskSet operator|(const MaskSet& a, const MaskSet& b) {
        return combine(a, b, [](bool x, bool y) { return x || y; });
    }
    friend MaskSet operator&(const MaskSet& a, const MaskSet& b) {
        return combine(a, b, [](bool x, bool y) { return x && y; });
    }
    /// Set difference a \ b.
    friend MaskSet operator-(const MaskSet& a, const MaskSet& b) {
        return combine(a, b, [](bool x, bool y) { return x && !y; });
    }
    friend bool operator==(const MaskSet& a, const MaskSet& b) {
        return a.grid_ == b.grid_ && a.bits_ == b.bits_;
    }

    ScalarField indicator() const {
        ScalarField out(grid_);
        for (std::size_t k = 0; k < bits_.size(); ++k) out[k] = bits_[k] ? 1.0 : 0.0;
        return out;
    }

private:
    template <typename Op>
    static MaskSet combine(const MaskSet& a, const MaskSet& b, Op op) {
        require_same_grid(a.grid_, b.grid_);
        MaskSet out(a.grid_);
        for (std::size_t k = 0; k < a.bits_.size(); ++k) {
            out.bits_[k] = op(a.bits_[k] != 0, b.bits_[k] != 0) ? 1 : 0;
        }
        out.recount();
        return out;
    }

    void recount() noexcept {
        count_ = static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }

    TorusGrid grid_;
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

/// h^2 * sum of values.
inline double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum * f.grid().cell_area();
}

/// Average of f over the cells of a.
inline double mean_over(const ScalarField& f, const MaskSet& a) {
    require_same_grid(f.grid(), a.grid());
    if (a.empty()) throw Error(ErrorCode::EmptyMask, "mean_over an empty set");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (a[k]) sum += f[k];
    }
    return sum / static_cast<double>(a.count());
}

/// Integral of f over the cells of a.
inline double integrate_over(const ScalarField& f, const MaskSet& a) {
    require_same_grid(f.grid(), a.grid());
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (a[k]) sum += f[k];
    }
    return sum * f.grid().cell_area();
}

/// 5-point periodic Laplacian.
inline ScalarField laplacian(const ScalarField& f) {
    const TorusGrid& g = f.grid();
    const int n = g.n();
    const double inv_h2 = static_cast<double>(n) * n;
    ScalarField out(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double c = f.at(i, j);
            out.at(i, j) = (f.at(i + 1, j) + f.at(i - 1, j) + f.at(i, j + 1) + f.at(i, j - 1) - 4.0 * c) * inv_h2;
        }
    }
    return out;
}

/// Eigenvalue of -laplacian() on the Fourier mode (kx, ky).
inline double stencil_eigenvalue(const TorusGrid& g, int kx, int ky) {
    const double n = g.n();
    const double sx = std::sin(std::numbers::pi * kx / n);
    const double sy = std::sin(std::numbers::pi * ky / n);
    return 4.0 * n * n * (sx * sx + sy * sy);
}

inline ScalarField pointwise_max(const ScalarField& f, double floor) {
    ScalarField out = f;
    for (double& v : out.values()) v = std::max(v, floor);
    return out;
}

}  // namespace polar
