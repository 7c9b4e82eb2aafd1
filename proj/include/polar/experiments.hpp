#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "polar/config.hpp"
#include "polar/initdata.hpp"
#include "polar/report.hpp"
#include "polar/solver.hpp"

namespace polar {

/// Tracks the last recorded time before the first failed check.
class WindowTracker {
public:
    void observe(double t, bool ok) {
        if (broken_) return;
        if (ok) {
            t_bar_ = t;
            seen_ = true;
        } else {
            broken_ = true;
        }
    }

    /// nan when the very first observation failed.
    double t_bar() const { return seen_ ? t_bar_ : std::numeric_limits<double>::quiet_NaN(); }
    bool broken() const noexcept { return broken_; }

private:
    double t_bar_ = 0.0;
    bool seen_ = false;
    bool broken_ = false;
};

struct PowerFit {
    double exponent;
    double prefactor;
    double residual;  ///< rms of the log residuals
    int points;
};

/// Least squares fit of log y = log c + p log t over points with t, y > 0.
inline PowerFit fit_power_law(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int c = 0;
    for (auto [t, y] : pts) {
        if (!(t > 0.0) || !(y > 0.0)) continue;
        const double x = std::log(t), v = std::log(y);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
        ++c;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (c < 2 || c * sxx - sx * sx <= 0.0) return PowerFit{nan, nan, nan, c};
    const double p = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    const double b = (sy - p * sx) / c;
    double ss = 0;
    for (auto [t, y] : pts) {
        if (!(t > 0.0) || !(y > 0.0)) continue;
        const double r = std::log(y) - (b + p * std::log(t));
        ss += r * r;
    }
    return PowerFit{p, std::exp(b), std::sqrt(ss / c), c};
}

/// lambda <= Lambda(support) + 1e-6 with equality to 1e-3 at most records.
/// The support mean is tallied alongside as a diagnostic.
struct LambdaBoundTally {
    int records = 0;
    int above = 0;          ///< lambda > Lambda_S + 1e-6
    int unequal = 0;        ///< |lambda - Lambda_S| > 1e-3
    double worst = -std::numeric_limits<double>::infinity();  ///< max lambda - Lambda_S
    int mean_above = 0;     ///< same test with lambda_of(g, support) in place of lambda
    int mean_unequal = 0;

    void observe(const Coefficient& g, const RecordView& v) {
        if (v.support.empty()) return;
        const double big = capital_lambda(g, v.support);
        const double mean = lambda_of(g, v.support);
        ++records;
        if (v.lambda > big + 1e-6) ++above;
        if (std::abs(v.lambda - big) > 1e-3) ++unequal;
        if (mean > big + 1e-6) ++mean_above;
        if (std::abs(mean - big) > 1e-3) ++mean_unequal;
        worst = std::max(worst, v.lambda - big);
    }

    void merge(const LambdaBoundTally& o) {
        records += o.records;
        above += o.above;
        unequal += o.unequal;
        mean_above += o.mean_above;
        mean_unequal += o.mean_unequal;
        worst = std::max(worst, o.worst);
    }

    double unequal_fraction() const { return records ? double(unequal) / records : 0.0; }
    double mean_unequal_fraction() const { return records ? double(mean_unequal) / records : 0.0; }
    bool holds() const { return above == 0 && unequal_fraction() < 0.05; }
    bool mean_holds() const { return mean_above == 0 && mean_unequal_fraction() < 0.05; }
};

/// u(t) >= S(t) u0 - t - 10 dt at every recorded time.
struct SubsolutionTally {
    int records = 0;
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();  ///< min of u - (S(t)u0 - t) + 10 dt

    void observe(const ScalarField& u0, const RecordView& v, double dt) {
        const ScalarField s = heat_semigroup(u0, v.t);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < s.size(); ++k) margin = std::min(margin, v.u[k] - (s[k] - v.t) + 10.0 * dt);
        ++records;
        if (margin < 0.0) ++violations;
        worst = std::min(worst, margin);
    }

    void merge(const SubsolutionTally& o) {
        records += o.records;
        violations += o.violations;
        worst = std::min(worst, o.worst);
    }
};

/// Initial field and solver parameters for one eps of a scenario. Nondegenerate
/// data get the quasi-equilibrium collar; anything else starts from u0 itself.
struct PreparedRun {
    ScalarField u;
    SolverParams params;
    double m;
    double sigma;
};

inline PreparedRun prepare_run(const InitialData& d, const Coefficient& g, SolverParams p, double eps) {
    p.eps = eps;
    const Regime regime = classify(g, d);
    if (regime.tag == RegimeTag::Nondegenerate && std::isfinite(regime.theta)) {
        if (p.theta == 0.0) p.theta = regime.theta;
        const double sigma = admissible_sigma(g, d, p.theta, 8);
        RegularizedInitial ri = build_regularized_initial(d, g, eps, p.theta, sigma);
        if (p.L0 == 0.0) p.L0 = SolverParams::default_L0(g.g0, p.theta, ri.m);
        return PreparedRun{std::move(ri.u), p.resolved(g.grid(), g), ri.m, sigma};
    }
    return PreparedRun{d.u0, p.resolved(g.grid(), g), 0.0, 0.0};
}

namespace detail {

inline void require_regime(const Regime& r, RegimeTag want, const std::string& experiment) {
    if (r.tag != want) {
        throw Error(ErrorCode::WrongRegime, experiment + " needs " + to_string(want) + " data, got " +
                                                to_string(r.tag));
    }
}

inline ExperimentReport start_report(const std::string& experiment, const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = experiment;
    rep.scenario = cfg.scenario;
    rep.n = cfg.n;
    return rep;
}

inline void lambda_bound_rows(ExperimentReport& rep, const LambdaBoundTally& t, double eps) {
    rep.check("lambda-bound", "lambda <= Lambda(support) + 1e-6", NAN, eps, t.worst, 1e-6, NAN, t.above == 0);
    rep.check("lambda-bound", "fraction with |lambda - Lambda(support)| > 1e-3", NAN, eps, t.unequal_fraction(),
              0.05, NAN, t.unequal_fraction() < 0.05);
    rep.info("lambda-bound", "support mean above Lambda(support) (records)", NAN, eps, t.mean_above);
    rep.info("lambda-bound", "support mean unequal fraction", NAN, eps, t.mean_unequal_fraction());
}

}  // namespace detail

/**
 * Support and multiplier continuity for nondegenerate data: for every eta and
 * eps, the largest recorded t_bar with
 *   erode(S0, eta) <= support(t) <= dilate(S0, eta)  and  |lambda(t) - lambda0| <= eta
 * on [0, t_bar]. Also records mass drift, the Holder-in-time fit on the first
 * 100 steps, the lambda <= Lambda tally and the subsolution bound.
 */
inline ExperimentReport experiment_continuity(const ExperimentConfig& cfg) {
    cfg.validate();
    const Scenario sc = preset_scenario(cfg.scenario, cfg.n);
    const Coefficient& g = sc.g;
    const InitialData& d = sc.data;
    const Regime regime = classify(g, d);
    detail::require_regime(regime, RegimeTag::Nondegenerate, "continuity");

    ExperimentReport rep = detail::start_report("continuity", cfg);
    rep.regime = to_string(regime.tag);
    rep.scalar("lambda0", d.lambda0);
    rep.scalar("Lambda", capital_lambda(g, d.support));
    rep.scalar("theta", regime.theta);

    std::vector<MaskSet> inner, outer;
    for (double eta : cfg.eta_list) {
        inner.push_back(erode(d.support, eta));
        outer.push_back(dilate(d.support, eta));
    }

    // t_bar[eta][eps]
    std::vector<std::vector<double>> t_bar(cfg.eta_list.size());
    std::vector<std::vector<std::pair<double, double>>> lambda_at(cfg.eps_list.size());
    LambdaBoundTally all_bound;
    SubsolutionTally all_sub;

    for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
        const double eps = cfg.eps_list[e];
        const PreparedRun run = prepare_run(d, g, cfg.solver, eps);
        const SolverParams& p = run.params;
        if (e == 0) {
            rep.scalar("sigma", run.sigma);
            rep.scalar("dt", p.dt);
        }
        rep.info("continuity-inclusion", "L0", NAN, eps, p.L0);
        rep.info("continuity-inclusion", "m", NAN, eps, run.m);

        std::vector<WindowTracker> windows(cfg.eta_list.size());
        LambdaBoundTally bound;
        SubsolutionTally sub;
        const Trajectory tr = run_regularized(run.u, g, p, [&](const RecordView& v) {
            for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
                const bool ok = inner[k].subset_of(v.support) && v.support.subset_of(outer[k]) &&
                                std::abs(v.lambda - d.lambda0) <= cfg.eta_list[k];
                windows[k].observe(v.t, ok);
            }
            lambda_at[e].emplace_back(v.t, v.lambda);
            bound.observe(g, v);
            sub.observe(d.u0, v, p.dt);
        });

        const double drift = std::abs(tr.mass.back() - tr.mass.front()) / tr.mass.front();
        rep.check("mass", "relative mass drift", NAN, eps, drift, 1e-9, NAN, drift < 1e-9);
        double alpha_gap = 0.0;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            alpha_gap = std::max(alpha_gap, std::abs(tr.alpha[k] - (1.0 / tr.lambda[k] - 1.0)));
        }
        rep.check("mass", "max |alpha - (1/lambda - 1)|", NAN, eps, alpha_gap, 1e-12, NAN, alpha_gap <= 1e-12);

        for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
            const double tb = windows[k].t_bar();
            t_bar[k].push_back(tb);
            rep.check("continuity-inclusion", "t_bar > 0", cfg.eta_list[k], eps, tb, 0.0, tb, tb > 0.0);
        }
        detail::lambda_bound_rows(rep, bound, eps);
        rep.check("subsolution", "min of u - (S(t)u0 - t) + 10 dt", NAN, eps, sub.worst, 0.0, NAN,
                  sub.violations == 0);
        all_bound.merge(bound);
        all_sub.merge(sub);

        // Holder-in-time behaviour of max|u(t) - u(0)| on [dt, 100 dt].
        SolverParams hp = p;
        hp.T = 100 * p.dt;
        hp.record_every = 1;
        hp.snapshot_every = 0;
        std::vector<std::pair<double, double>> holder;
        run_regularized(run.u, g, hp, [&](const RecordView& v) {
            if (v.step == 0) return;
            double mx = 0.0;
            for (std::size_t k = 0; k < v.u.size(); ++k) mx = std::max(mx, std::abs(v.u[k] - run.u[k]));
            holder.emplace_back(v.t, mx);
        });
        const PowerFit hf = fit_power_law(holder);
        rep.check("holder-time", "fitted exponent of max|u(t) - u(0)|", NAN, eps, hf.exponent, 0.75, NAN,
                  hf.exponent >= 0.75);
    }

    for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
        const double eta = cfg.eta_list[k];
        bool non_shrinking = true;
        for (std::size_t e = 1; e < t_bar[k].size(); ++e) {
            if (!(t_bar[k][e] >= t_bar[k][e - 1])) non_shrinking = false;
        }
        const double lo = *std::min_element(t_bar[k].begin(), t_bar[k].end());
        rep.check("continuity-inclusion", "t_bar non-shrinking as eps decreases", eta, NAN, lo, 0.0, lo,
                  non_shrinking);
        for (std::size_t e = 1; e < t_bar[k].size(); ++e) {
            rep.info("continuity-inclusion", "successive t_bar gap", eta, cfg.eps_list[e],
                     std::abs(t_bar[k][e] - t_bar[k][e - 1]));
        }
    }
    for (std::size_t k = 1; k < cfg.eta_list.size(); ++k) {
        for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
            const bool ok = !(t_bar[k][e] > t_bar[k - 1][e]);
            rep.check("continuity-multiplier", "t_bar non-decreasing in eta", cfg.eta_list[k], cfg.eps_list[e],
                      t_bar[k][e], t_bar[k - 1][e], t_bar[k][e], ok);
        }
    }

    // Cauchy behaviour of lambda_eps at the final recorded time.
    for (std::size_t e = 1; e < lambda_at.size(); ++e) {
        rep.info("continuity-multiplier", "|lambda_eps(T) - lambda_prev(T)|", NAN, cfg.eps_list[e],
                 std::abs(lambda_at[e].back().second - lambda_at[e - 1].back().second));
    }
    rep.scalar("lambda_bound_unequal_fraction", all_bound.unequal_fraction());
    rep.scalar("subsolution_worst_margin", all_sub.worst);
    return rep;
}

/**
 * One-sided excess d(t) of the support over {u0 > 0} on [10 dt, 1000 dt] at
 * the smallest eps: a pure power-law fit and a C sqrt(t |log t|) envelope.
 * The envelope constant is fitted on the first half of the window and
 * asserted on all of it.
 */
inline ExperimentReport experiment_growth(const ExperimentConfig& cfg) {
    cfg.validate();
    const Scenario sc = preset_scenario(cfg.scenario, cfg.n);
    const Coefficient& g = sc.g;
    const InitialData& d = sc.data;
    const Regime regime = classify(g, d);
    detail::require_regime(regime, RegimeTag::Nondegenerate, "growth");

    ExperimentReport rep = detail::start_report("growth", cfg);
    rep.regime = to_string(regime.tag);
    rep.scalar("lambda0", d.lambda0);

    const double eps = cfg.eps_list.back();
    SolverParams base = cfg.solver;
    PreparedRun run = prepare_run(d, g, base, eps);
    SolverParams p = run.params;
    p.T = 1000 * p.dt;
    p.record_every = 10;

    std::vector<std::pair<double, double>> excess_pts;
    double d0 = NAN;
    run_regularized(run.u, g, p, [&](const RecordView& v) {
        const double dist = v.support.empty() ? 0.0 : excess(v.support, d.support);
        if (v.step == 0) d0 = dist;
        if (v.step >= 10) excess_pts.emplace_back(v.t, dist);
    });

    rep.check("growth-bound", "d(0)", NAN, eps, d0, 0.0, NAN, d0 == 0.0);
    const PowerFit fit = fit_power_law(excess_pts);
    rep.scalar("growth_exponent", fit.exponent);
    rep.scalar("growth_prefactor", fit.prefactor);
    rep.check("growth-bound", "fitted exponent of d(t) in [0.4, 0.6]", NAN, eps, fit.exponent, 0.5, NAN,
              fit.exponent >= 0.4 && fit.exponent <= 0.6);
    rep.info("growth-bound", "log-fit rms residual", NAN, eps, fit.residual);

    auto envelope = [](double t) { return std::sqrt(t * std::abs(std::log(t))); };
    double c2 = 0.0;
    for (std::size_t k = 0; k < excess_pts.size() / 2; ++k) {
        c2 = std::max(c2, excess_pts[k].second / envelope(excess_pts[k].first));
    }
    // one cell of slack: d(t) lives on the grid
    const double h = g.grid().h();
    double worst = -std::numeric_limits<double>::infinity();
    for (auto [t, dist] : excess_pts) worst = std::max(worst, dist - (c2 * envelope(t) + h));
    rep.scalar("growth_C2", c2);
    rep.check("growth-bound", "max d(t) - (C2 sqrt(t|log t|) + h)", NAN, eps, worst, 0.0, NAN, worst <= 0.0);
    if (!excess_pts.empty()) {
        rep.info("growth-bound", "d at 10 dt", NAN, eps, excess_pts.front().second, excess_pts.front().first);
        rep.info("growth-bound", "d at 1000 dt", NAN, eps, excess_pts.back().second, excess_pts.back().first);
    }
    return rep;
}

/// Initial-jump data and the sequence used by experiment_jump, exposed for tests.
struct JumpSetup {
    Scenario scenario;
    double big_lambda;
    MaskSet maximizer;
    JumpSequenceParams params;
    JumpSequence sequence;
};

inline JumpSetup prepare_jump(const ExperimentConfig& cfg) {
    Scenario sc = preset_scenario(cfg.scenario, cfg.n);
    detail::require_regime(classify(sc.g, sc.data), RegimeTag::Jump, "jump");
    const double big_lambda = capital_lambda(sc.g, sc.data.support);
    MaskSet maximizer = maximizer_set(sc.g, sc.data.support, big_lambda);
    JumpSequenceParams jp = JumpSequenceParams::defaults(sc.g);
    if (cfg.gamma0 > 0.0) jp.gamma0 = cfg.gamma0;
    jp.ratio = cfg.ratio;
    jp.nmax = std::min(cfg.nmax, feasible_members(sc.g, jp, big_lambda));
    if (jp.nmax < 1) throw Error(ErrorCode::SequenceExhausted, "grid too coarse for any sequence member");
    JumpSequence seq = build_jump_sequence(sc.data, sc.g, jp, big_lambda);
    return JumpSetup{std::move(sc), big_lambda, std::move(maximizer), jp, std::move(seq)};
}

/**
 * Initial jump to the maximizer A* = {g >= Lambda} u {u0 > 0}.
 *   - variational pair (lambda0, Lambda) and |A* \ {u0 > 0}|
 *   - sequence properties (nesting is asserted at construction)
 *   - ordering and L1 contraction along four raw members at the smallest eps
 *   - cross-validation: the finest member, made nondegenerate by its own
 *     collar, gives lambda_eps(10 dt) closer to Lambda than to lambda0,
 *     tightening as eps decreases
 *   - sandwich erode({u0>0} u {g>Lambda}, eta) <= support <= dilate(A*, eta)
 *     with |lambda - Lambda| <= eta from step 10 on
 */
inline ExperimentReport experiment_jump(const ExperimentConfig& cfg) {
    cfg.validate();
    const JumpSetup js = prepare_jump(cfg);
    const Coefficient& g = js.scenario.g;
    const InitialData& d = js.scenario.data;
    const JumpSequence& seq = js.sequence;
    const double big = js.big_lambda;

    ExperimentReport rep = detail::start_report("jump", cfg);
    rep.regime = to_string(classify(g, d).tag);
    rep.scalar("lambda0", d.lambda0);
    rep.scalar("Lambda", big);
    rep.scalar("members", static_cast<double>(seq.members.size()));
    rep.scalar("n_dagger", seq.n_dagger);

    rep.info("jump-limit", "lambda0", NAN, NAN, d.lambda0);
    rep.info("jump-limit", "Lambda", NAN, NAN, big);
    rep.check("jump-strict-gap", "Lambda - lambda0", NAN, NAN, big - d.lambda0, 0.0, NAN, big > d.lambda0);
    const double new_area = (js.maximizer - d.support).area();
    rep.check("jump-strict-gap", "|A* \\ {u0 > 0}|", NAN, NAN, new_area, 0.0, NAN, new_area > 0.0);

    // sequence diagnostics
    for (std::size_t n = 0; n < seq.members.size(); ++n) {
        rep.info("sequence", "|lambda_n - Lambda| / gamma_n", NAN, static_cast<double>(n),
                 std::abs(seq.lambda[n] - big) / seq.gamma[n]);
    }
    rep.check("sequence", "n_dagger <= members", NAN, NAN, seq.n_dagger, static_cast<double>(seq.members.size()),
              NAN, seq.n_dagger < static_cast<int>(seq.members.size()));
    bool excess_monotone = true;
    for (std::size_t n = 1; n < seq.excess_area.size(); ++n) {
        if (seq.excess_area[n] > seq.excess_area[n - 1]) excess_monotone = false;
    }
    rep.check("sequence", "|{u_n > 0} \\ A*| non-increasing", NAN, NAN, seq.excess_area.back(), NAN, NAN,
              excess_monotone);
    rep.info("sequence", "|{u_n > 0} \\ A*| at finest member", NAN, NAN, seq.excess_area.back());
    for (double eta : cfg.eta_list) {
        rep.info("sequence", "first member inside dilate(A*, eta)", eta, NAN, inclusion_index(seq, js.maximizer, eta));
    }

    const MaskSet strict = d.support | MaskSet::where(g.g, [big](double v) { return v > big; });
    std::vector<MaskSet> inner, outer;
    for (double eta : cfg.eta_list) {
        inner.push_back(erode(strict, eta));
        outer.push_back(dilate(js.maximizer, eta));
    }

    SolverParams base = cfg.solver;
    base.theta = 0.0;
    if (base.L0 == 0.0) base.L0 = SolverParams::default_L0(g.g0, 0.0, 0.0);

    // ordering, contraction and subsolution along raw members
    {
        const double eps = cfg.eps_list.back();
        SolverParams p = base;
        p.eps = eps;
        p = p.resolved(g.grid(), g);
        p.snapshot_every = 1;
        std::vector<ScalarField> picks;
        const std::size_t count = std::min<std::size_t>(4, seq.members.size());
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t idx = count == 1 ? 0 : k * (seq.members.size() - 1) / (count - 1);
            picks.push_back(seq.members[idx]);
        }
        SubsolutionTally sub;
        const auto trs = run_approx_sequence(picks, g, p, [&](std::size_t, const RecordView& v) {
            sub.observe(d.u0, v, p.dt);
        });
        double worst_order = 0.0, worst_contraction = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a + 1 < trs.size(); ++a) {
            const auto& hi = trs[a].snapshots;      // coarser member, larger data
            const auto& lo = trs[a + 1].snapshots;  // finer member
            double prev = NAN;
            for (std::size_t r = 0; r < hi.size(); ++r) {
                double spread = 0.0;  // integral of (u_coarser - u_finer)_+
                for (std::size_t k = 0; k < hi[r].second.size(); ++k) {
                    const double diff = lo[r].second[k] - hi[r].second[k];
                    worst_order = std::max(worst_order, diff);
                    spread += std::max(-diff, 0.0);
                }
                spread *= g.grid().cell_area();
                if (r > 0) {
                    const double steps = std::round((hi[r].first - hi[r - 1].first) / p.dt);
                    worst_contraction = std::max(worst_contraction, spread - prev - 1e-8 * steps);
                }
                prev = spread;
            }
        }
        rep.check("ordering", "max (u_finer - u_coarser)", NAN, eps, worst_order, 1e-9, NAN, worst_order <= 1e-9);
        rep.check("contraction", "max growth of integral (u_coarser - u_finer)_+ beyond slack", NAN, eps,
                  worst_contraction, 0.0, NAN, worst_contraction <= 0.0);
        rep.check("subsolution", "min of u_n - (S(t)u0 - t) + 10 dt", NAN, eps, sub.worst, 0.0, NAN,
                  sub.violations == 0);
    }

    // cross-validation on the finest member
    const InitialData finest = InitialData::make(seq.members.back(), g);
    const Regime fr = classify(g, finest);
    rep.info("jump-limit", "finest member lambda", NAN, NAN, finest.lambda0);
    std::vector<double> gaps;
    LambdaBoundTally bound_all;
    SubsolutionTally sub_all;
    for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
        const double eps = cfg.eps_list[e];
        SolverParams p = base;
        p.eps = eps;
        ScalarField start = finest.u0;
        if (fr.tag == RegimeTag::Nondegenerate && std::isfinite(fr.theta)) {
            const double sigma = admissible_sigma(g, finest, fr.theta, 4);
            start = build_regularized_initial(finest, g, eps, fr.theta, sigma).u;
        }
        p = p.resolved(g.grid(), g);
        std::vector<WindowTracker> windows(cfg.eta_list.size());
        double lambda10 = NAN, t10 = NAN;
        LambdaBoundTally bound;
        SubsolutionTally sub;
        run_regularized(start, g, p, [&](const RecordView& v) {
            bound.observe(g, v);
            sub.observe(d.u0, v, p.dt);
            if (v.step < 10) return;
            if (std::isnan(lambda10)) {
                lambda10 = v.lambda;
                t10 = v.t;
            }
            for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
                const bool ok = inner[k].subset_of(v.support) && v.support.subset_of(outer[k]) &&
                                std::abs(v.lambda - big) <= cfg.eta_list[k];
                windows[k].observe(v.t, ok);
            }
        });
        const double gap = std::abs(lambda10 - big);
        gaps.push_back(gap);
        rep.info("jump-limit", "lambda_eps at 10 dt", NAN, eps, lambda10, t10);
        rep.check("jump-limit", "|lambda_eps(10 dt) - Lambda|", NAN, eps, gap, 0.5 * (big - d.lambda0), t10,
                  gap < 0.5 * (big - d.lambda0));
        const bool finest_eps = e + 1 == cfg.eps_list.size();
        for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
            const double tb = windows[k].t_bar();
            if (finest_eps && k == 0) {
                rep.check("jump-inclusion", "t_bar > 0", cfg.eta_list[k], eps, tb, 0.0, tb, tb > 0.0);
            } else {
                rep.info("jump-inclusion", "t_bar", cfg.eta_list[k], eps, tb, tb);
            }
        }
        detail::lambda_bound_rows(rep, bound, eps);
        rep.check("subsolution", "min of u - (S(t)u0 - t) + 10 dt", NAN, eps, sub.worst, 0.0, NAN,
                  sub.violations == 0);
        bound_all.merge(bound);
        sub_all.merge(sub);
    }
    bool tightening = true;
    for (std::size_t e = 1; e < gaps.size(); ++e) {
        if (!(gaps[e] < gaps[e - 1])) tightening = false;
    }
    rep.check("jump-limit", "gap tightens as eps decreases", NAN, NAN, gaps.back(), NAN, NAN, tightening);
    rep.scalar("jump_gap_finest", gaps.back());
    rep.scalar("lambda_bound_unequal_fraction", bound_all.unequal_fraction());
    rep.scalar("subsolution_worst_margin", sub_all.worst);

    // the unmodified base problem, recorded for comparison only
    {
        SolverParams p = base;
        p.eps = cfg.eps_list.back();
        p = p.resolved(g.grid(), g);
        double lambda10 = NAN;
        run_regularized(d.u0, g, p, [&](const RecordView& v) {
            if (v.step >= 10 && std::isnan(lambda10)) lambda10 = v.lambda;
        });
        rep.info("jump-limit", "base problem lambda_eps at 10 dt", NAN, p.eps, lambda10);
    }
    return rep;
}

/// Sources used by the classical experiment.
inline ScalarField classical_source(const TorusGrid& grid, const std::string& which) {
    if (which == "negative") return ScalarField(grid, -0.5);
    if (which == "zero") return ScalarField(grid, 0.0);
    if (which == "disk") {
        return ScalarField::sample(grid, [](double x, double y) {
            return torus_distance(x, y, 0.1, 0.1) < 0.1 ? 0.5 : -0.5;
        });
    }
    throw Error(ErrorCode::InvalidArgument, "unknown classical source '" + which + "'");
}

/**
 * Classical problem u_t - lap u = f H(u), support threshold 1e-6.
 *   negative  f = -0.5: erode(S0, eta) <= support <= dilate(S0, eta)
 *   disk      f = +0.5 on a disk R away from S0: the jump sandwich
 *             erode(S0 u {f > 0}, eta) <= support <= dilate(S0 u {f >= 0}, eta)
 *             from step 10 on, and support meets R
 *   zero      pure heat flow, recorded only
 */
inline ExperimentReport experiment_classical(const ExperimentConfig& cfg) {
    cfg.validate();
    const Scenario sc = preset_scenario(cfg.scenario, cfg.n);
    const InitialData& d = sc.data;
    const TorusGrid grid = sc.g.grid();

    ExperimentReport rep = detail::start_report("classical", cfg);
    rep.regime = to_string(classify(sc.g, d).tag);

    SolverParams p = cfg.solver;
    p.eps = 1e-6;
    p.L0 = 1.0;
    p = p.resolved(grid, sc.g);
    rep.scalar("threshold", p.threshold());
    rep.scalar("dt", p.dt);

    for (const std::string which : {"negative", "disk"}) {
        const ScalarField f = classical_source(grid, which);
        const MaskSet pos = MaskSet::where(f, [](double v) { return v > 0.0; });
        const MaskSet nonneg = MaskSet::where(f, [](double v) { return v >= 0.0; });
        const std::string tag = which == "negative" ? "classical-continuity" : "classical-jump";
        const int first_step = which == "negative" ? 0 : 10;
        std::vector<WindowTracker> windows(cfg.eta_list.size());
        std::vector<MaskSet> inner, outer;
        for (double eta : cfg.eta_list) {
            inner.push_back(erode(d.support | pos, eta));
            outer.push_back(dilate(d.support | nonneg, eta));
        }
        bool meets_r = false;
        double first_meet = NAN;
        run_classical(d.u0, ClassicalSource::constant(f), p, [&](const RecordView& v) {
            if (!pos.empty() && v.step > 0 && !meets_r && !(v.support & pos).empty()) {
                meets_r = true;
                first_meet = v.t;
            }
            if (v.step < first_step) return;
            for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
                windows[k].observe(v.t, inner[k].subset_of(v.support) && v.support.subset_of(outer[k]));
            }
        });
        for (std::size_t k = 0; k < cfg.eta_list.size(); ++k) {
            const double tb = windows[k].t_bar();
            rep.check(tag, "t_bar > 0", cfg.eta_list[k], NAN, tb, 0.0, tb, tb > 0.0);
        }
        if (!pos.empty()) {
            rep.check(tag, "support meets {f > 0} for small t", NAN, NAN, first_meet, NAN, first_meet, meets_r);
        }
    }

    {
        const ScalarField f = classical_source(grid, "zero");
        const ClassicalTrajectory tr = run_classical(d.u0, ClassicalSource::constant(f), p);
        rep.info("classical-heat", "support area at T", NAN, NAN, tr.support_area.back(), tr.times.back());
        rep.info("classical-heat", "relative mass drift", NAN, NAN,
                 std::abs(tr.mass.back() - tr.mass.front()) / tr.mass.front());
    }
    return rep;
}

}  // namespace polar
