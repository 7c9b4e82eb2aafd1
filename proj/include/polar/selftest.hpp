#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

#include "polar/experiments.hpp"
#include "polar/reference.hpp"

namespace polar {

namespace detail {

inline MaskSet random_mask(const TorusGrid& grid, std::mt19937_64& rng, double density) {
    std::bernoulli_distribution coin(density);
    MaskSet m(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) m.set(k, coin(rng));
    if (m.empty()) m.set(std::size_t{0}, true);
    if (m.full()) m.set(std::size_t{0}, false);
    return m;
}

inline Coefficient random_coefficient(const TorusGrid& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 0.8);
    ScalarField f(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) f[k] = u(rng);
    return Coefficient(std::move(f), 0.2, 0.8);
}

}  // namespace detail

/// Quick property checks over every module; deterministic in the seed.
inline ExperimentReport run_selftest(std::uint64_t seed) {
    ExperimentReport rep;
    rep.experiment = "selftest";
    rep.scenario = "random";
    rep.n = 32;
    std::mt19937_64 rng(seed);
    const TorusGrid grid(32);
    const double h = grid.h();

    // bisection against the threshold scan
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const Coefficient g = detail::random_coefficient(grid, rng);
        const MaskSet s = detail::random_mask(grid, rng, 0.1 + 0.08 * trial);
        worst = std::max(worst, std::abs(capital_lambda(g, s) - reference::capital_lambda_scan(g, s)));
    }
    rep.check("variational", "max |Lambda bisection - scan|", NAN, NAN, worst, 1e-9, NAN, worst <= 1e-9);

    // distance transform against all pairs, and delta-set identities
    bool dist_ok = true, sets_ok = true;
    for (int trial = 0; trial < 10; ++trial) {
        const MaskSet a = detail::random_mask(grid, rng, 0.05 + 0.05 * trial);
        const MaskSet c = detail::random_mask(grid, rng, 0.3);
        const auto fast = detail::squared_cell_distance(a);
        const auto slow = reference::squared_distance_all_pairs(a);
        for (std::size_t k = 0; k < fast.size(); ++k) dist_ok = dist_ok && fast[k] == slow[k];
        for (double delta : {h, 2 * h, 5 * h}) {
            sets_ok = sets_ok && dilate(a, delta).complement().subset_of(erode(a.complement(), delta));
            sets_ok = sets_ok && erode(a, delta).complement().subset_of(dilate(a.complement(), delta));
            sets_ok = sets_ok && dilate(a | c, delta) == (dilate(a, delta) | dilate(c, delta));
            const MaskSet eu = erode(a | c, delta);
            sets_ok = sets_ok && (erode(a, delta) | erode(c, delta)).subset_of(eu);
            sets_ok = sets_ok &&
                        eu.subset_of(erode(a, delta) | erode(c, delta) | (dilate(a, delta) - erode(a, delta)));
        }
    }
    rep.check("delta-sets", "distance transform equals all-pairs scan", NAN, NAN, dist_ok, 1, NAN, dist_ok);
    rep.check("delta-sets", "complement and union identities", NAN, NAN, sets_ok, 1, NAN, sets_ok);

    // heat solves conserve mass
    ScalarField f(grid);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = unit(rng);
    const double m0 = integrate(f);
    const double d1 = std::abs(integrate(implicit_heat_solve(f, 1e-3)) - m0) / m0;
    const double d2 = std::abs(integrate(heat_semigroup(f, 1e-2)) - m0) / m0;
    rep.check("heat", "relative mass change of heat solves", NAN, NAN, std::max(d1, d2), 1e-12, NAN,
              std::max(d1, d2) < 1e-12);

    // regularized stepping conserves mass
    {
        const Coefficient g = detail::random_coefficient(grid, rng);
        SolverParams p;
        p.eps = 1e-2;
        p.L0 = 1.0;
        p = p.resolved(grid, g);
        ScalarField u = f;
        for (int s = 0; s < 200; ++s) u = step_regularized(u, g, p).u;
        const double drift = std::abs(integrate(u) - m0) / m0;
        rep.check("mass", "relative drift over 200 steps", NAN, p.eps, drift, 1e-10, NAN, drift < 1e-10);
    }

    // bump properties
    {
        const MaskSet inner = MaskSet::positive(disk_bump(grid, 0.5, 0.5, 0.15));
        const MaskSet outer = dilate(inner, 4 * h);
        const ScalarField z = build_bump(BumpSpec{inner, outer, 2});
        bool ok = true;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (inner[k]) ok = ok && z[k] == 1.0;
            else if (outer[k]) ok = ok && z[k] > 0.0 && z[k] <= 1.0;
            else ok = ok && z[k] == 0.0;
        }
        rep.check("bump", "one on inner, positive on outer, zero outside", NAN, NAN, ok, 1, NAN, ok);
    }

    // field io round trip
    {
        std::stringstream ss;
        write_field(ss, f, "selftest");
        const NamedField back = read_field(ss);
        bool same = back.name == "selftest" && back.field.grid() == grid;
        for (std::size_t k = 0; same && k < f.size(); ++k) same = back.field[k] == f[k];
        rep.check("io", "field round trip is bit exact", NAN, NAN, same, 1, NAN, same);
    }

    // jump sequence on the preset
    {
        const Scenario sc = preset_scenario("jump", 128);
        const double big = capital_lambda(sc.g, sc.data.support);
        JumpSequenceParams jp{0.06, 0.45, 8};
        jp.nmax = std::min(jp.nmax, feasible_members(sc.g, jp, big));
        bool built = true;
        int members = 0;
        try {
            members = static_cast<int>(build_jump_sequence(sc.data, sc.g, jp, big).members.size());
        } catch (const Error&) {
            built = false;
        }
        rep.check("sequence", "jump sequence builds with exact post-conditions", NAN, NAN, members, 1, NAN,
                  built && members >= 1);
    }
    return rep;
}

}  // namespace polar
