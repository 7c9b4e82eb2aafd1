#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "polar/distance.hpp"
#include "polar/variational.hpp"

namespace polar {

/// Polynomial smoothstep of the given order on [0, 1]: C^order, strictly
/// increasing, S(0) = 0, S(1) = 1 and 0 < S(x) < 1 inside.
inline double smoothstep(double x, int order) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // S_N(x) = x^{N+1} sum_k C(N+k, k) C(2N+1, N-k) (-x)^k
    const int n = order;
    auto binom = [](int a, int b) {
        double r = 1.0;
        for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    double sum = 0.0, xk = 1.0;
    for (int k = 0; k <= n; ++k) {
        sum += binom(n + k, k) * binom(2 * n + 1, n - k) * xk;
        xk *= -x;
    }
    return std::pow(x, n + 1) * sum;
}

struct BumpSpec {
    MaskSet inner;  ///< U1, where the bump equals 1
    MaskSet outer;  ///< U2, strictly containing dilate(U1, h)
    int order = 1;
};

/**
 * Cut-off zeta with zeta = 1 on inner, 0 < zeta <= 1 on outer and zeta = 0
 * off outer. Built as smoothstep(d_out / (d_out + d_in)) where d_in is the
 * distance to inner and d_out the distance to the complement of outer.
 */
inline ScalarField build_bump(const BumpSpec& spec) {
    require_same_grid(spec.inner.grid(), spec.outer.grid());
    if (spec.order < 1) throw Error(ErrorCode::InvalidArgument, "smoothstep order must be >= 1");
    const TorusGrid grid = spec.inner.grid();
    if (spec.outer.empty() || spec.inner == spec.outer || !spec.inner.subset_of(spec.outer)) {
        throw Error(ErrorCode::BadContainment, "bump needs inner strictly inside outer");
    }
    if (!spec.inner.empty() && !dilate(spec.inner, grid.h()).subset_of(spec.outer)) {
        throw Error(ErrorCode::BadContainment, "dilate(inner, h) is not contained in outer");
    }

    const double far = std::numbers::sqrt2;  // exceeds every distance on the unit torus
    const ScalarField d_in = spec.inner.empty() ? ScalarField(grid, far) : distance_to(spec.inner);
    const ScalarField d_out = spec.outer.full() ? ScalarField(grid, far) : distance_to(spec.outer.complement());

    ScalarField zeta(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (spec.inner[k]) {
            zeta[k] = 1.0;
        } else if (spec.outer[k]) {
            zeta[k] = smoothstep(d_out[k] / (d_out[k] + d_in[k]), spec.order);
        }
    }
    return zeta;
}

struct RegularizedInitial {
    ScalarField u;    ///< u0 + hat_u * zeta
    double m;         ///< max of u / eps over {u0 = 0}
    MaskSet collar;   ///< K_sigma = dilate({u0 = 0}, sigma)
};

/// Largest sigma = k h (0 <= k <= max_cells) with (1-g) - alpha0 g >= theta/2 on
/// dilate({u0 = 0}, sigma). sigma = 0 means the collar is {u0 = 0} itself.
inline double admissible_sigma(const Coefficient& g, const InitialData& d, double theta, int max_cells) {
    const MaskSet zero = d.support.complement();
    if (zero.empty()) return g.grid().h();
    const ScalarField dist = distance_to(zero);
    const double h = g.grid().h();
    int best = 0;
    for (int k = 1; k <= max_cells; ++k) {
        bool ok = true;
        for (std::size_t c = 0; c < dist.size() && ok; ++c) {
            if (dist[c] <= k * h * (1 + 1e-12) && (1.0 - g.g[c]) - d.alpha0 * g.g[c] < 0.5 * theta) ok = false;
        }
        if (!ok) break;
        best = k;
    }
    return best * h;
}

/**
 * Regularized initial data u0 + hat_u zeta with
 *   hat_u = eps alpha0 g / ((1-g) - alpha0 g)   on K_sigma,
 * the quasi-equilibrium of the Michaelis-Menten reaction at multiplier alpha0.
 */
inline RegularizedInitial build_regularized_initial(const InitialData& d, const Coefficient& g, double eps,
                                                    double theta, double sigma) {
    require_same_grid(d.u0.grid(), g.grid());
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (!(theta > 0.0)) throw Error(ErrorCode::NotNondegenerate, "theta must be positive");
    const TorusGrid grid = g.grid();
    const Regime regime = classify(g, d);
    if (regime.tag != RegimeTag::Nondegenerate) {
        throw Error(ErrorCode::NotNondegenerate, std::string("initial data is ") + to_string(regime.tag));
    }

    const MaskSet zero = d.support.complement();
    if (zero.empty()) return RegularizedInitial{d.u0, 0.0, MaskSet(grid)};
    if (sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be non-negative");

    const MaskSet collar = dilate(zero, sigma);
    ScalarField hat(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!collar[k]) continue;
        const double gap = (1.0 - g.g[k]) - d.alpha0 * g.g[k];
        if (gap < 0.5 * theta) {
            throw Error(ErrorCode::NotNondegenerate, "(1-g) - alpha0 g < theta/2 inside the collar");
        }
        hat[k] = eps * d.alpha0 * g.g[k] / gap;
    }

    ScalarField zeta = collar == zero   ? zero.indicator()
                       : collar.full() ? ScalarField(grid, 1.0)
                                       : build_bump(BumpSpec{zero, collar, 2});
    ScalarField u = d.u0;
    double m = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        u[k] += hat[k] * zeta[k];
        if (zero[k]) m = std::max(m, u[k] / eps);
    }
    return RegularizedInitial{std::move(u), m, collar};
}

struct JumpSequenceParams {
    double gamma0;
    double ratio = 1.0 / 3.0;
    int nmax = 8;

    static JumpSequenceParams defaults(const Coefficient& g) {
        return JumpSequenceParams{0.1 * (g.g1 - g.g0), 1.0 / 3.0, 8};
    }
};

/// Decreasing initial data u_n = u0 + gamma_n zeta_n whose supports shrink to the
/// maximizer {g >= Lambda} u {u0 > 0}; members are indexed n = 0 .. nmax-1.
struct JumpSequence {
    double big_lambda;
    std::vector<double> gamma;
    std::vector<double> level;          ///< r_n (one more entry than members)
    std::vector<ScalarField> members;
    std::vector<double> lambda;         ///< lambda_n = mean of g over {u_n > 0}
    std::vector<double> excess_area;    ///< |{u_n > 0} \ A*|
    int n_dagger;                       ///< first n after which |lambda_m - Lambda| < gamma_m / 4 for all m >= n
};

namespace detail {

/// Distinct realized value of g in [lo, hi] nearest to the midpoint.
inline double realized_level(const std::vector<double>& sorted_values, double lo, double hi) {
    auto first = std::lower_bound(sorted_values.begin(), sorted_values.end(), lo);
    auto last = std::upper_bound(sorted_values.begin(), sorted_values.end(), hi);
    if (first == last) {
        throw Error(ErrorCode::SequenceExhausted, "no grid value of g in the admissible level interval");
    }
    const double mid = 0.5 * (lo + hi);
    double best = *first;
    for (auto it = first; it != last; ++it) {
        if (std::abs(*it - mid) < std::abs(best - mid)) best = *it;
    }
    return best;
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::PostconditionFailed, what);
}

}  // namespace detail

/// Number of members (at most p.nmax) whose level intervals all contain a grid value of g.
inline int feasible_members(const Coefficient& g, const JumpSequenceParams& p, double big_lambda) {
    std::vector<double> values(g.g.values().begin(), g.g.values().end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    int levels = 0;
    for (int n = 0; n <= p.nmax; ++n) {
        const double gamma = p.gamma0 * std::pow(p.ratio, n);
        auto first = std::lower_bound(values.begin(), values.end(), big_lambda - 2.0 * gamma);
        auto last = std::upper_bound(values.begin(), values.end(), big_lambda - gamma);
        if (first == last) break;
        ++levels;
    }
    return std::max(levels - 1, 0);
}

inline JumpSequence build_jump_sequence(const InitialData& d, const Coefficient& g, const JumpSequenceParams& p,
                                        double big_lambda) {
    require_same_grid(d.u0.grid(), g.grid());
    if (!(p.gamma0 > 0.0) || !(p.ratio > 0.0 && p.ratio < 0.5) || p.nmax < 1) {
        throw Error(ErrorCode::InvalidArgument, "jump sequence needs gamma0 > 0, 0 < ratio < 1/2, nmax >= 1");
    }
    const TorusGrid grid = g.grid();
    std::vector<double> values(g.g.values().begin(), g.g.values().end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    JumpSequence seq;
    seq.big_lambda = big_lambda;
    for (int n = 0; n <= p.nmax; ++n) {
        const double gamma = p.gamma0 * std::pow(p.ratio, n);
        seq.gamma.push_back(gamma);
        seq.level.push_back(detail::realized_level(values, big_lambda - 2.0 * gamma, big_lambda - gamma));
    }
    seq.gamma.pop_back();

    const MaskSet maximizer = maximizer_set(g, d.support, big_lambda);
    for (int n = 0; n < p.nmax; ++n) {
        const double lo = seq.level[n];
        const double hi = seq.level[n + 1];
        ScalarField u = d.u0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double zeta = smoothstep((g.g[k] - lo) / (hi - lo), 1);
            u[k] += seq.gamma[n] * zeta;
        }
        const MaskSet support = MaskSet::positive(u);
        seq.lambda.push_back(lambda_of(g, support));
        seq.excess_area.push_back((support - maximizer).area());
        seq.members.push_back(std::move(u));
    }

    // Exact post-conditions: ordering, nesting, positivity/vanishing bands, C0 bound.
    for (int n = 0; n < p.nmax; ++n) {
        const ScalarField& u = seq.members[n];
        const double gamma = seq.gamma[n];
        for (std::size_t k = 0; k < grid.size(); ++k) {
            detail::require(u[k] >= d.u0[k], "u_n >= u0");
            if (n + 1 < p.nmax) detail::require(seq.members[n + 1][k] <= u[k], "u_{n+1} <= u_n");
            if (g.g[k] >= big_lambda - gamma) detail::require(u[k] > 0.0, "u_n > 0 on {g >= Lambda - gamma_n}");
            if (g.g[k] <= big_lambda - 2.0 * gamma && !d.support[k]) {
                detail::require(u[k] == 0.0, "u_n = 0 on {g <= Lambda - 2 gamma_n} n {u0 = 0}");
            }
            detail::require(u[k] - d.u0[k] <= gamma, "|u_n - u0| <= gamma_n");
        }
        if (n + 1 < p.nmax) {
            detail::require(MaskSet::positive(seq.members[n + 1]).subset_of(MaskSet::positive(u)),
                            "supports are nested");
        }
    }

    seq.n_dagger = p.nmax;
    for (int n = p.nmax - 1; n >= 0; --n) {
        if (std::abs(seq.lambda[n] - big_lambda) < seq.gamma[n] / 4.0) seq.n_dagger = n; else break;
    }
    return seq;
}

inline JumpSequence build_jump_sequence(const InitialData& d, const Coefficient& g, const JumpSequenceParams& p) {
    return build_jump_sequence(d, g, p, capital_lambda(g, d.support));
}

/// Smallest n with {u_m > 0} inside dilate(A*, eta) for every m >= n (members.size() if none).
inline int inclusion_index(const JumpSequence& seq, const MaskSet& maximizer, double eta) {
    const MaskSet widened = dilate(maximizer, eta);
    int first = static_cast<int>(seq.members.size());
    for (int n = static_cast<int>(seq.members.size()) - 1; n >= 0; --n) {
        if (MaskSet::positive(seq.members[n]).subset_of(widened)) first = n; else break;
    }
    return first;
}

struct Scenario {
    std::string name;
    Coefficient g;
    InitialData data;
};

/// g(x, y) = 0.5 + 0.2 sin(2 pi x) sin(2 pi y), with range [0.3, 0.7].
inline ScalarField preset_coefficient_field(const TorusGrid& grid) {
    return ScalarField::sample(grid, [](double x, double y) {
        return 0.5 + 0.2 * std::sin(2.0 * std::numbers::pi * x) * std::sin(2.0 * std::numbers::pi * y);
    });
}

/// Periodic distance between points of the unit torus.
inline double torus_distance(double x0, double y0, double x1, double y1) {
    auto wrap = [](double d) {
        d = std::abs(d);
        d -= std::floor(d);
        return std::min(d, 1.0 - d);
    };
    return std::hypot(wrap(x0 - x1), wrap(y0 - y1));
}

/// Quadratic-contact bump of radius r around (cx, cy): (1 - |x-c|^2 / r^2)_+^2.
inline ScalarField disk_bump(const TorusGrid& grid, double cx, double cy, double r) {
    return ScalarField::sample(grid, [=](double x, double y) {
        const double s = 1.0 - std::pow(torus_distance(x, y, cx, cy) / r, 2);
        return s > 0.0 ? s * s : 0.0;
    });
}

inline constexpr double kContinuityLevel = 0.55;
inline constexpr double kContinuityScale = 100.0;

/**
 * Canonical scenarios on an n x n grid:
 *   continuity  u0 = K (g - c)_+^2 with c = 0.55, K = 100, so {u0 > 0} = {g > c}
 *   jump        quadratic bump of radius 0.15 centered at the minimizer (3/4, 1/4) of g
 *   nongeneric  g = 0.5 everywhere, bump of radius 0.15 at the center
 *   classical   g as above; u0 a quadratic-contact cap of height 1/4 and radius 0.2 at the center
 */
inline Scenario preset_scenario(const std::string& name, int n) {
    const TorusGrid grid(n);
    if (name == "continuity") {
        Coefficient g(preset_coefficient_field(grid), 0.3, 0.7);
        const double c = kContinuityLevel;
        ScalarField u0(grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double s = std::max(g.g[k] - c, 0.0);
            u0[k] = kContinuityScale * s * s;
        }
        return Scenario{name, g, InitialData::make(std::move(u0), g)};
    }
    if (name == "jump") {
        Coefficient g(preset_coefficient_field(grid), 0.3, 0.7);
        return Scenario{name, g, InitialData::make(disk_bump(grid, 0.75, 0.25, 0.15), g)};
    }
    if (name == "nongeneric") {
        Coefficient g(ScalarField(grid, 0.5), 0.5, 0.5);
        return Scenario{name, g, InitialData::make(disk_bump(grid, 0.5, 0.5, 0.15), g)};
    }
    if (name == "classical") {
        Coefficient g(preset_coefficient_field(grid), 0.3, 0.7);
        return Scenario{name, g, InitialData::make(disk_bump(grid, 0.5, 0.5, 0.2) * 0.25, g)};
    }
    throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
}

}  // namespace polar
