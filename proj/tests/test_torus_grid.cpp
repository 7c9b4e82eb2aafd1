#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polar/torus_grid.hpp"

using namespace polar;

TEST(TorusGrid, RejectsTooFewCells) {
    EXPECT_THROW(TorusGrid(7), Error);
    EXPECT_NO_THROW(TorusGrid(8));
}

TEST(TorusGrid, SpacingIsReciprocal) {
    const TorusGrid g(128);
    EXPECT_EQ(g.h() * g.n(), 1.0);
    EXPECT_EQ(g.size(), 128u * 128u);
    EXPECT_EQ(g.index(3, 2), 2u * 128 + 3);
    EXPECT_EQ(g.wrap(-1), 127);
    EXPECT_EQ(g.wrap(128), 0);
}

TEST(Integrate, ConstantsAndCells) {
    const TorusGrid g(16);
    EXPECT_DOUBLE_EQ(integrate(ScalarField(g, 1.0)), 1.0);
    EXPECT_EQ(integrate(ScalarField(g, 0.0)), 0.0);
    ScalarField f(g);
    for (int k = 0; k < 7; ++k) f[static_cast<std::size_t>(k * 13)] = 2.5;
    EXPECT_NEAR(integrate(f), 2.5 * 7 / 256.0, 1e-15);
}

TEST(MeanOver, Examples) {
    const TorusGrid g(16);
    std::mt19937_64 rng(3);
    const MaskSet a = oracle::random_mask(g, rng, 0.3);
    EXPECT_NEAR(mean_over(ScalarField(g, 0.4), a), 0.4, 1e-15);
    const ScalarField two = ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 0.2 : 0.8; });
    EXPECT_NEAR(mean_over(two, MaskSet(g, true)), 0.5, 1e-15);
    const ScalarField r = oracle::random_field(g, rng, 0.0, 1.0);
    EXPECT_NEAR(mean_over(r, MaskSet(g, true)), integrate(r), 1e-15);
    EXPECT_NEAR(mean_over(r, a), oracle::direct_mean(r, a), 1e-14);
    EXPECT_THROW(mean_over(r, MaskSet(g)), Error);
}

TEST(MaskSet, AreaTracksPopcount) {
    const TorusGrid g(8);
    MaskSet m(g);
    m.set(std::size_t{5}, true);
    m.set(std::size_t{5}, true);
    m.set(std::size_t{9}, true);
    EXPECT_EQ(m.count(), 2u);
    EXPECT_DOUBLE_EQ(m.area(), 2.0 / 64);
    m.set(std::size_t{9}, false);
    EXPECT_EQ(m.count(), 1u);
    EXPECT_EQ(m.complement().count(), 63u);
    EXPECT_TRUE(m.subset_of(m | m.complement()));
    EXPECT_TRUE((m & m.complement()).empty());
}

TEST(MaskSet, GridMismatchIsAnError) {
    EXPECT_THROW(MaskSet(TorusGrid(8)) | MaskSet(TorusGrid(16)), Error);
}

TEST(Laplacian, ConstantIsInKernel) {
    const TorusGrid g(16);
    const ScalarField l = laplacian(ScalarField(g, 3.0));
    for (double v : l.values()) EXPECT_EQ(v, 0.0);
}

TEST(Laplacian, CosineIsEigenfunction) {
    const TorusGrid g(32);
    const double h = g.h();
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return std::cos(2 * std::numbers::pi * x); });
    const ScalarField l = laplacian(f);
    const double mu = (2 / (h * h)) * (1 - std::cos(2 * std::numbers::pi * h));
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(l[k], -mu * f[k], 1e-9);
    EXPECT_NEAR(mu, stencil_eigenvalue(g, 1, 0), 1e-9);
}

TEST(Laplacian, MatchesStencilOracleAndIntegratesToZero) {
    const TorusGrid g(16);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField f = oracle::random_field(g, rng, -1.0, 1.0);
        const ScalarField l = laplacian(f);
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) EXPECT_NEAR(l.at(i, j), oracle::laplacian_at(f, i, j), 1e-10);
        EXPECT_LT(std::abs(integrate(l)), 1e-12);
    }
}
