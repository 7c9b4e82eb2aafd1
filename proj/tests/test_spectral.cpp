#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polar/spectral.hpp"

using namespace polar;

namespace {

ScalarField mode(const TorusGrid& g, int kx, int ky) {
    return ScalarField::sample(g, [=](double x, double y) {
        return std::cos(2 * std::numbers::pi * (kx * x + ky * y));
    });
}

}  // namespace

TEST(ImplicitHeat, ZeroStepAndConstants) {
    const TorusGrid g(16);
    std::mt19937_64 rng(2);
    const ScalarField f = oracle::random_field(g, rng, 0.0, 1.0);
    const ScalarField w = implicit_heat_solve(f, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(w[k], f[k], 1e-14);
    const ScalarField c = implicit_heat_solve(ScalarField(g, 0.7), 1.0);
    for (double v : c.values()) EXPECT_NEAR(v, 0.7, 1e-14);
    EXPECT_THROW(implicit_heat_solve(f, -1e-3), Error);
}

TEST(ImplicitHeat, DividesEachModeByItsSymbol) {
    const TorusGrid g(32);
    for (auto [kx, ky] : {std::pair{1, 0}, std::pair{2, 3}, std::pair{5, 1}}) {
        const ScalarField f = mode(g, kx, ky);
        const double mu = stencil_eigenvalue(g, kx, ky);
        const ScalarField w = implicit_heat_solve(f, 1.0);
        for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(w[k], f[k] / (1 + mu), 1e-13);
    }
}

TEST(ImplicitHeat, SolvesTheLinearSystem) {
    const TorusGrid g(24);
    std::mt19937_64 rng(4);
    const ScalarField f = oracle::random_field(g, rng, -1.0, 1.0);
    const double tau = 3e-4;
    const ScalarField w = implicit_heat_solve(f, tau);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            EXPECT_NEAR(w.at(i, j) - tau * oracle::laplacian_at(w, i, j), f.at(i, j), 1e-11);
        }
}

TEST(HeatSemigroup, ModesDecayExponentially) {
    const TorusGrid g(32);
    const ScalarField f = mode(g, 3, 2);
    const double t = 0.002;
    const double mu = stencil_eigenvalue(g, 3, 2);
    const ScalarField s = heat_semigroup(f, t);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(s[k], std::exp(-t * mu) * f[k], 1e-13);
}

TEST(HeatSemigroup, IdentityConstantsMassAndMaxPrinciple) {
    const TorusGrid g(32);
    std::mt19937_64 rng(6);
    const ScalarField f = oracle::random_field(g, rng, 0.0, 1.0);
    const ScalarField s0 = heat_semigroup(f, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(s0[k], f[k], 1e-14);
    const ScalarField c = heat_semigroup(ScalarField(g, 2.0), 5.0);
    for (double v : c.values()) EXPECT_NEAR(v, 2.0, 1e-13);
    const ScalarField s = heat_semigroup(f, 0.37);
    EXPECT_LT(std::abs(integrate(s) - integrate(f)), 1e-12);
    for (double t : {1e-5, 1e-3, 0.1}) {
        const ScalarField st = heat_semigroup(f, t);
        EXPECT_GE(st.min(), f.min() - 1e-12);
        EXPECT_LE(st.max(), f.max() + 1e-12);
    }
    EXPECT_THROW(heat_semigroup(f, -1.0), Error);
}

TEST(HeatSolves, ConserveMassOnRandomData) {
    std::mt19937_64 rng(8);
    for (int n : {8, 16, 30}) {
        const TorusGrid g(n);
        const ScalarField f = oracle::random_field(g, rng, 0.0, 2.0);
        const double m = integrate(f);
        EXPECT_LT(std::abs(integrate(implicit_heat_solve(f, 1e-2)) - m) / m, 1e-12);
        EXPECT_LT(std::abs(integrate(heat_semigroup(f, 1e-2)) - m) / m, 1e-12);
    }
}
