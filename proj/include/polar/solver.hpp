#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "polar/distance.hpp"
#include "polar/field_io.hpp"
#include "polar/spectral.hpp"
#include "polar/variational.hpp"

namespace polar {

enum class Scheme { Imex, Explicit };

inline const char* to_string(Scheme s) { return s == Scheme::Imex ? "imex" : "explicit"; }

inline Scheme parse_scheme(const std::string& s) {
    if (s == "imex") return Scheme::Imex;
    if (s == "explicit") return Scheme::Explicit;
    throw Error(ErrorCode::ConfigError, "unknown scheme '" + s + "' (expected imex or explicit)");
}

struct SolverParams {
    double eps = 1e-3;
    double dt = 0.0;        ///< 0 selects 0.25 h^2
    double T = 0.05;
    double theta = 0.0;     ///< 0 when unknown (jump regime)
    double L0 = 0.0;        ///< support threshold multiplier; 0 selects the default
    Scheme scheme = Scheme::Imex;
    int record_every = 10;
    int snapshot_every = 0; ///< 0 disables snapshots; otherwise every k-th record

    double threshold() const { return L0 * eps; }

    int steps() const { return static_cast<int>(std::llround(T / dt)); }

    /// Fills dt and L0 defaults and checks the invariants for this grid.
    SolverParams resolved(const TorusGrid& grid, const Coefficient& g) const {
        SolverParams p = *this;
        if (p.dt == 0.0) p.dt = 0.25 * grid.h() * grid.h();
        if (p.L0 == 0.0) p.L0 = default_L0(g.g0, p.theta, 0.0);
        p.validate(grid);
        return p;
    }

    void validate(const TorusGrid& grid) const {
        if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
        if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
        if (!(T >= 0.0)) throw Error(ErrorCode::NegativeTime, "horizon T must be non-negative");
        if (!(L0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "L0 must be positive");
        if (record_every < 1) throw Error(ErrorCode::InvalidArgument, "record_every must be >= 1");
        if (snapshot_every < 0) throw Error(ErrorCode::InvalidArgument, "snapshot_every must be >= 0");
        if (scheme == Scheme::Explicit && dt > 0.25 * grid.h() * grid.h() * (1 + 1e-12)) {
            throw Error(ErrorCode::InvalidArgument, "explicit scheme needs dt <= h^2/4");
        }
    }

    /// L0 >= 2m and (1-g0)/(L0+1) <= theta/4; without theta, 4(1-g0)/g0.
    static double default_L0(double g0, double theta, double m) {
        if (theta > 0.0) return std::max(2.0 * m, 4.0 * (1.0 - g0) / theta - 1.0);
        return std::max(2.0 * m, 4.0 * (1.0 - g0) / g0);
    }
};

/// Michaelis-Menten rate u / (u + eps).
inline double mm_rate(double u, double eps) { return u / (u + eps); }

/// alpha_eps = int (1-g) f_eps(u) / int g for the current field.
inline double regularized_alpha(const ScalarField& u, const Coefficient& g, double eps) {
    require_same_grid(u.grid(), g.grid());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        num += (1.0 - g.g[k]) * mm_rate(u[k], eps);
        den += g.g[k];
    }
    return num / den;
}

struct StepResult {
    ScalarField u;
    double lambda;
    double alpha;
};

/**
 * One step of u_t - lap u = -(1-g) f_eps(u) + alpha_eps g with alpha_eps taken
 * from the incoming field, so the reaction integrates to zero and mass is
 * conserved by construction. Diffusion is implicit (imex) or explicit.
 */
inline StepResult step_regularized(const ScalarField& u, const Coefficient& g, const SolverParams& p) {
    require_same_grid(u.grid(), g.grid());
    const double alpha = regularized_alpha(u, g, p.eps);
    ScalarField rhs(u.grid());
    for (std::size_t k = 0; k < u.size(); ++k) {
        rhs[k] = -(1.0 - g.g[k]) * mm_rate(u[k], p.eps) + alpha * g.g[k];
    }

    ScalarField next(u.grid());
    if (p.scheme == Scheme::Imex) {
        ScalarField w = u;
        for (std::size_t k = 0; k < u.size(); ++k) w[k] += p.dt * rhs[k];
        next = implicit_heat_solve(w, p.dt);
    } else {
        next = laplacian(u);
        for (std::size_t k = 0; k < u.size(); ++k) next[k] = u[k] + p.dt * (next[k] + rhs[k]);
    }
    if (next.min() < -1e-12) {
        throw Error(ErrorCode::NegativityBreach, "step produced u < 0; reduce dt");
    }
    return StepResult{std::move(next), 1.0 / (1.0 + alpha), alpha};
}

/// {u > L0 eps}
inline MaskSet support_of(const ScalarField& u, const SolverParams& p) {
    const double thr = p.threshold();
    return MaskSet::where(u, [thr](double v) { return v > thr; });
}

struct Trajectory {
    std::vector<double> times;
    std::vector<double> lambda;
    std::vector<double> alpha;
    std::vector<double> mass;
    std::vector<double> support_area;
    std::vector<std::pair<double, ScalarField>> snapshots;
    std::vector<std::pair<double, MaskSet>> support_masks;

    std::size_t size() const noexcept { return times.size(); }

    /// Columns t,lambda,alpha,mass,support_area,hausdorff_to_initial. The last
    /// column is measured against the first recorded support and is nan when
    /// either set is empty.
    void write_csv(std::ostream& os) const {
        os << "t,lambda,alpha,mass,support_area,hausdorff_to_initial\n";
        for (std::size_t k = 0; k < size(); ++k) {
            double hd = std::numeric_limits<double>::quiet_NaN();
            const MaskSet& first = support_masks.front().second;
            const MaskSet& now = support_masks[k].second;
            if (!first.empty() && !now.empty()) hd = hausdorff(now, first);
            char buf[256];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", times[k], lambda[k], alpha[k],
                          mass[k], support_area[k], hd);
            os << buf;
        }
    }

    /// Writes snapshots as <dir>/<run>/u_t<k>.f64.
    void write_snapshots(const std::filesystem::path& dir, const std::string& run) const {
        const auto sub = dir / run;
        std::filesystem::create_directories(sub);
        for (std::size_t k = 0; k < snapshots.size(); ++k) {
            write_field((sub / ("u_t" + std::to_string(k) + ".f64")).string(), snapshots[k].second,
                        run + "_u_t" + std::to_string(k));
        }
    }
};

/// What an observer sees at every recorded time.
struct RecordView {
    int step;
    double t;
    const ScalarField& u;
    const MaskSet& support;
    double lambda;
};

using Observer = std::function<void(const RecordView&)>;

namespace detail {

inline void record(Trajectory& tr, int step, int record_index, double t, const ScalarField& u, double alpha,
                   const SolverParams& p, const Observer& observer) {
    MaskSet support = support_of(u, p);
    const double lambda = 1.0 / (1.0 + alpha);
    tr.times.push_back(t);
    tr.lambda.push_back(lambda);
    tr.alpha.push_back(alpha);
    tr.mass.push_back(integrate(u));
    tr.support_area.push_back(support.area());
    if (p.snapshot_every > 0 && record_index % p.snapshot_every == 0) tr.snapshots.emplace_back(t, u);
    if (observer) observer(RecordView{step, t, u, support, lambda});
    tr.support_masks.emplace_back(t, std::move(support));
}

}  // namespace detail

/// Integrates to T, recording every record_every steps and at the final step.
inline Trajectory run_regularized(const ScalarField& u0eps, const Coefficient& g, const SolverParams& p,
                                  const Observer& observer = {}) {
    require_same_grid(u0eps.grid(), g.grid());
    p.validate(g.grid());
    if (u0eps.min() < 0.0) throw Error(ErrorCode::InvalidArgument, "initial data must be non-negative");

    Trajectory tr;
    const int steps = p.steps();
    ScalarField u = u0eps;
    int records = 0;
    detail::record(tr, 0, records++, 0.0, u, regularized_alpha(u, g, p.eps), p, observer);
    for (int s = 1; s <= steps; ++s) {
        u = step_regularized(u, g, p).u;
        if (s % p.record_every == 0 || s == steps) {
            detail::record(tr, s, records++, s * p.dt, u, regularized_alpha(u, g, p.eps), p, observer);
        }
    }
    return tr;
}

/// Runs every member with the same parameters; observer receives the member index.
inline std::vector<Trajectory> run_approx_sequence(
    const std::vector<ScalarField>& seq, const Coefficient& g, const SolverParams& p,
    const std::function<void(std::size_t, const RecordView&)>& observer = {}) {
    std::vector<Trajectory> out;
    out.reserve(seq.size());
    for (std::size_t n = 0; n < seq.size(); ++n) {
        Observer inner;
        if (observer) inner = [&observer, n](const RecordView& v) { observer(n, v); };
        out.push_back(run_regularized(seq[n], g, p, inner));
    }
    return out;
}

/// Source f(., t) of the classical problem u_t - lap u = f H(u).
struct ClassicalSource {
    std::function<ScalarField(double)> f;

    ScalarField operator()(double t) const { return f(t); }

    static ClassicalSource constant(ScalarField field) {
        return ClassicalSource{[field = std::move(field)](double) { return field; }};
    }
};

/**
 * IMEX step for the classical problem followed by truncation at zero.
 * H is the indicator of {u > 0} on the current iterate, extended by {f > 0}:
 * the constraint f <= 0 on {u = 0} forces any cell with f > 0 into the
 * positivity set.
 */
inline ScalarField step_classical(const ScalarField& u, const ClassicalSource& src, double t,
                                  const SolverParams& p) {
    const ScalarField f = src(t);
    require_same_grid(u.grid(), f.grid());
    ScalarField w = u;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] > 0.0 || f[k] > 0.0) w[k] += p.dt * f[k];
    }
    return pointwise_max(implicit_heat_solve(w, p.dt), 0.0);
}

struct ClassicalTrajectory {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> support_area;
    std::vector<std::pair<double, MaskSet>> support_masks;
};

inline ClassicalTrajectory run_classical(const ScalarField& u0, const ClassicalSource& src, const SolverParams& p,
                                         const Observer& observer = {}) {
    p.validate(u0.grid());
    if (u0.min() < 0.0) throw Error(ErrorCode::InvalidArgument, "initial data must be non-negative");
    ClassicalTrajectory tr;
    auto rec = [&](int step, double t, const ScalarField& u) {
        MaskSet support = support_of(u, p);
        tr.times.push_back(t);
        tr.mass.push_back(integrate(u));
        tr.support_area.push_back(support.area());
        if (observer) observer(RecordView{step, t, u, support, std::numeric_limits<double>::quiet_NaN()});
        tr.support_masks.emplace_back(t, std::move(support));
    };
    ScalarField u = u0;
    rec(0, 0.0, u);
    const int steps = p.steps();
    for (int s = 1; s <= steps; ++s) {
        u = step_classical(u, src, (s - 1) * p.dt, p);
        if (s % p.record_every == 0 || s == steps) rec(s, s * p.dt, u);
    }
    return tr;
}

}  // namespace polar
