#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "polar/torus_grid.hpp"

namespace polar {

/// Reaction coefficient g with bounds 0 < g0 <= min g <= max g <= g1 < 1.
struct Coefficient {
    ScalarField g;
    double g0;
    double g1;

    Coefficient(ScalarField field, double lower, double upper)
        : g(std::move(field)), g0(lower), g1(upper) {
        if (!g.all_finite()) throw Error(ErrorCode::InvalidArgument, "coefficient has non-finite entries");
        if (!(0.0 < g0 && g0 <= g.min() && g.max() <= g1 && g1 < 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "coefficient violates 0 < g0 <= g <= g1 < 1");
        }
    }

    /// Bounds taken as the realized min and max.
    static Coefficient tight(ScalarField field) {
        const double lo = field.min();
        const double hi = field.max();
        return Coefficient(std::move(field), lo, hi);
    }

    const TorusGrid& grid() const noexcept { return g.grid(); }
};

/// Average of g over a: the Lagrange multiplier of a support.
inline double lambda_of(const Coefficient& g, const MaskSet& a) { return mean_over(g.g, a); }

/// int_a (1-g) / int_a g, computed as its own quotient (not from lambda_of).
inline double alpha_of(const Coefficient& g, const MaskSet& a) {
    require_same_grid(g.grid(), a.grid());
    if (a.empty()) throw Error(ErrorCode::EmptyMask, "alpha_of an empty set");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k]) {
            num += 1.0 - g.g[k];
            den += g.g[k];
        }
    }
    return num / den;
}

struct InitialData {
    ScalarField u0;
    MaskSet support;
    double lambda0;
    double alpha0;

    static InitialData make(ScalarField u0, const Coefficient& g) {
        require_same_grid(u0.grid(), g.grid());
        if (!u0.all_finite() || u0.min() < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "initial data must be finite and non-negative");
        }
        MaskSet support = MaskSet::positive(u0);
        if (support.empty()) throw Error(ErrorCode::EmptyMask, "initial data has empty support");
        const double lambda0 = lambda_of(g, support);
        const double alpha0 = alpha_of(g, support);
        return InitialData{std::move(u0), std::move(support), lambda0, alpha0};
    }
};

namespace detail {

/// Mean of g over S u {g >= mu}, accumulated as (sum, count).
inline double superlevel_union_mean(const Coefficient& g, const MaskSet& s, double mu) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] || g.g[k] >= mu) {
            sum += g.g[k];
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace detail

inline constexpr double kLambdaBracketWidth = 1e-12;

/**
 * Lambda_S = sup over A containing S of the mean of g over A.
 *
 * The supremum is attained on S u {g >= Lambda_S}, so it is the fixed point
 * of F(mu) = mean of g over S u {g >= mu}. F(mu) >= mu holds exactly for
 * mu <= Lambda_S, which makes mu -> sign(F(mu) - mu) a bisection predicate on
 * [lambda_of(g, S), g1]. The returned value is F at the lower bracket end, i.e.
 * the mean over an actual candidate set.
 */
inline double capital_lambda(const Coefficient& g, const MaskSet& s) {
    require_same_grid(g.grid(), s.grid());
    if (s.empty()) throw Error(ErrorCode::EmptyMask, "capital_lambda of an empty set");
    double lo = lambda_of(g, s);
    double hi = g.g1;
    const double at_hi = detail::superlevel_union_mean(g, s, hi);
    if (at_hi >= hi) return at_hi;
    while (hi - lo >= kLambdaBracketWidth) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (detail::superlevel_union_mean(g, s, mid) >= mid) lo = mid; else hi = mid;
    }
    return std::max(detail::superlevel_union_mean(g, s, lo), lambda_of(g, s));
}

/// {g >= Lambda_S} u S, the canonical (largest) maximizer.
inline MaskSet maximizer_set(const Coefficient& g, const MaskSet& s, double big_lambda) {
    MaskSet out = s;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (g.g[k] >= big_lambda) out.set(k, true);
    }
    return out;
}

inline MaskSet maximizer_set(const Coefficient& g, const MaskSet& s) {
    return maximizer_set(g, s, capital_lambda(g, s));
}

enum class RegimeTag { Nondegenerate, Jump, NonGeneric };

inline const char* to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::Nondegenerate: return "Nondegenerate";
        case RegimeTag::Jump: return "Jump";
        case RegimeTag::NonGeneric: return "NonGeneric";
    }
    return "?";
}

struct Regime {
    RegimeTag tag;
    double theta;          ///< min over {u0=0} of (1-g) - alpha0 g; meaningful for Nondegenerate
    double violation_area; ///< |{u0=0} n {g > lambda0}|
    double plateau_area;   ///< |{u0=0} n {|g - lambda0| <= tol}|
};

inline double default_classify_tol(const Coefficient& g) {
    return std::max(1e-9 * (g.g1 - g.g0), 1e-12);
}

/**
 * Places initial data in one of three regimes:
 *   Jump           |{u0 = 0} n {g > lambda0 + tol}| > 0
 *   NonGeneric     otherwise, |{u0 = 0} n {|g - lambda0| <= tol}| > 0
 *   Nondegenerate  otherwise; g < lambda0 on {u0 = 0} and theta > 0.
 * theta is +inf when u0 > 0 everywhere.
 */
inline Regime classify(const Coefficient& g, const InitialData& d, double tol) {
    require_same_grid(g.grid(), d.u0.grid());
    const double cell = g.grid().cell_area();
    std::size_t above = 0, level = 0;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d.support.size(); ++k) {
        if (d.support[k]) continue;
        const double gk = g.g[k];
        if (gk > d.lambda0 + tol) ++above;
        else if (gk >= d.lambda0 - tol) ++level;
        theta = std::min(theta, (1.0 - gk) - d.alpha0 * gk);
    }
    Regime r{RegimeTag::Nondegenerate, theta, above * cell, level * cell};
    if (above > 0) r.tag = RegimeTag::Jump;
    else if (level > 0) r.tag = RegimeTag::NonGeneric;
    return r;
}

inline Regime classify(const Coefficient& g, const InitialData& d) {
    return classify(g, d, default_classify_tol(g));
}

/// Cells of {u0 = 0} on the plateau {|g - Lambda| < tol}.
inline double plateau_area(const Coefficient& g, const InitialData& d, double big_lambda, double tol) {
    std::size_t count = 0;
    for (std::size_t k = 0; k < d.support.size(); ++k) {
        if (!d.support[k] && std::abs(g.g[k] - big_lambda) < tol) ++count;
    }
    return count * g.grid().cell_area();
}

/// One row of the variational report.
struct VariationalReport {
    double lambda0;
    double alpha0;
    double big_lambda;
    Regime regime;
    double plateau_area;
    MaskSet maximizer;

    static std::string csv_header() {
        return "lambda0,alpha0,Lambda,regime,theta,violationArea,plateauArea";
    }

    std::string csv_row() const {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g", lambda0, alpha0, big_lambda,
                      to_string(regime.tag), regime.theta, regime.violation_area, plateau_area);
        return buf;
    }
};

inline VariationalReport analyze(const Coefficient& g, const InitialData& d) {
    const double tol = default_classify_tol(g);
    const double big_lambda = capital_lambda(g, d.support);
    return VariationalReport{d.lambda0,
                             d.alpha0,
                             big_lambda,
                             classify(g, d, tol),
                             plateau_area(g, d, big_lambda, tol),
                             maximizer_set(g, d.support, big_lambda)};
}

}  // namespace polar
