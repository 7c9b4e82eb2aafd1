#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polar/distance.hpp"

using namespace polar;

namespace {

MaskSet single(const TorusGrid& g, int i, int j) {
    MaskSet m(g);
    m.set(i, j, true);
    return m;
}

}  // namespace

TEST(DistanceTo, FullSetIsZero) {
    const TorusGrid g(8);
    const ScalarField d = distance_to(MaskSet(g, true));
    for (double v : d.values()) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(distance_to(MaskSet(g)), Error);
}

TEST(DistanceTo, SingleCellAndWraparound) {
    const TorusGrid g(8);
    const ScalarField d = distance_to(single(g, 0, 0));
    EXPECT_DOUBLE_EQ(d.at(4, 0), 0.5);
    EXPECT_DOUBLE_EQ(d.at(7, 0), g.h());
    EXPECT_DOUBLE_EQ(d.at(0, 0), 0.0);
}

TEST(DistanceTo, MatchesAllPairsOracle) {
    std::mt19937_64 rng(5);
    for (int n : {8, 13, 16}) {
        const TorusGrid g(n);
        for (int trial = 0; trial < 6; ++trial) {
            const MaskSet a = oracle::random_mask(g, rng, 0.02 + 0.1 * trial);
            const auto want = oracle::sq_distance(a);
            const ScalarField got = distance_to(a);
            for (std::size_t k = 0; k < a.size(); ++k) {
                EXPECT_DOUBLE_EQ(got[k], g.h() * std::sqrt(static_cast<double>(want[k])));
            }
        }
    }
}

TEST(DistanceTo, TriangleInequality) {
    const TorusGrid g(12);
    std::mt19937_64 rng(7);
    const MaskSet a = oracle::random_mask(g, rng, 0.1);
    const ScalarField d = distance_to(a);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            // |d(x) - d(y)| <= |x - y| for neighbours
            EXPECT_LE(std::abs(d.at(i, j) - d.at(g.wrap(i + 1), j)), g.h() + 1e-15);
            EXPECT_LE(std::abs(d.at(i, j) - d.at(i, g.wrap(j + 1))), g.h() + 1e-15);
        }
}

TEST(Dilate, ZeroRadiusIsIdentity) {
    const TorusGrid g(16);
    std::mt19937_64 rng(1);
    const MaskSet a = oracle::random_mask(g, rng, 0.3);
    EXPECT_EQ(dilate(a, 0.0), a);
    EXPECT_EQ(erode(a, 0.0), a);
}

TEST(Dilate, SingleCellAtOneAndAHalfCells) {
    const TorusGrid g(16);
    const MaskSet d = dilate(single(g, 5, 5), 1.5 * g.h());
    EXPECT_EQ(d.count(), 9u);
    EXPECT_TRUE(d.at(6, 6));
    EXPECT_FALSE(d.at(7, 5));
}

TEST(Dilate, ErodeMatchOracle) {
    const TorusGrid g(16);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 8; ++trial) {
        const MaskSet a = trial % 2 ? oracle::random_mask(g, rng, 0.2) : oracle::random_blobs(g, rng, 2);
        for (int k : {1, 2, 3, 5}) {
            const double delta = k * g.h();
            EXPECT_EQ(dilate(a, delta), oracle::dilate(a, delta));
            EXPECT_EQ(erode(a, delta), oracle::erode(a, delta));
        }
    }
}

TEST(Dilate, MonotoneInSetAndRadius) {
    const TorusGrid g(16);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const MaskSet a = oracle::random_mask(g, rng, 0.1);
        const MaskSet b = a | oracle::random_mask(g, rng, 0.1);
        for (int k : {1, 2, 4}) {
            EXPECT_TRUE(dilate(a, k * g.h()).subset_of(dilate(b, k * g.h())));
            EXPECT_TRUE(dilate(a, k * g.h()).subset_of(dilate(a, (k + 1) * g.h())));
            EXPECT_TRUE(erode(a, (k + 1) * g.h()).subset_of(erode(a, k * g.h())));
        }
    }
}

TEST(Erode, FullComplementEmptyGivesTorus) {
    const TorusGrid g(8);
    EXPECT_TRUE(erode(MaskSet(g, true), 3 * g.h()).full());
}

TEST(DeltaSets, ComplementInclusions) {
    const TorusGrid g(24);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const MaskSet a = trial % 3 ? oracle::random_mask(g, rng, 0.3) : oracle::random_blobs(g, rng, 3);
        for (int k : {1, 2, 5}) {
            const double d = k * g.h();
            EXPECT_TRUE(dilate(a, d).complement().subset_of(erode(a.complement(), d)));
            EXPECT_TRUE(erode(a, d).complement().subset_of(dilate(a.complement(), d)));
        }
    }
}

TEST(DeltaSets, UnionIdentities) {
    const TorusGrid g(24);
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const MaskSet a = oracle::random_blobs(g, rng, 2), c = oracle::random_mask(g, rng, 0.2);
        for (int k : {1, 2, 5}) {
            const double d = k * g.h();
            EXPECT_EQ(dilate(a | c, d), dilate(a, d) | dilate(c, d));
            const MaskSet eu = erode(a | c, d);
            EXPECT_TRUE((erode(a, d) | erode(c, d)).subset_of(eu));
            EXPECT_TRUE(eu.subset_of(erode(a, d) | erode(c, d) | (dilate(a, d) - erode(a, d))));
        }
    }
}

TEST(LevelSetRadii, SandwichHoldsOnSmoothFunction) {
    const TorusGrid g(48);
    const ScalarField f = ScalarField::sample(g, [](double x, double y) {
        return std::sin(2 * std::numbers::pi * x) * std::cos(2 * std::numbers::pi * y) - 0.1;
    });
    const MaskSet pos = MaskSet::positive(f);
    for (int k = 1; k <= 10; ++k) {
        const double r = 0.08 * k;
        const MaskSet upper = MaskSet::where(f, [r](double v) { return v >= r; });
        const LevelSetRadii rad = level_set_radii(f, r);
        EXPECT_TRUE(erode(pos, rad.inner).subset_of(upper)) << "r = " << r;
        if (!upper.empty()) {
            EXPECT_TRUE(upper.subset_of(erode(pos, rad.outer))) << "r = " << r;
            EXPECT_LE(rad.outer, rad.inner + 1e-12);
        }
    }
}

TEST(Hausdorff, Examples) {
    const TorusGrid g(16);
    std::mt19937_64 rng(23);
    const MaskSet a = oracle::random_mask(g, rng, 0.2);
    EXPECT_EQ(hausdorff(a, a), 0.0);
    for (int k = 1; k < 16; ++k) {
        EXPECT_DOUBLE_EQ(hausdorff(single(g, 0, 0), single(g, k, 0)), std::min(k, 16 - k) * g.h());
    }
    for (int trial = 0; trial < 5; ++trial) {
        const MaskSet b = oracle::random_mask(g, rng, 0.1), c = oracle::random_blobs(g, rng, 1);
        EXPECT_DOUBLE_EQ(hausdorff(b, c), hausdorff(c, b));
        EXPECT_DOUBLE_EQ(hausdorff(b, c), oracle::hausdorff(b, c));
    }
    EXPECT_THROW(hausdorff(a, MaskSet(g)), Error);
}

TEST(BoundaryAnnulus, StripeCountsTwoInterfaces) {
    const TorusGrid g(64);
    const MaskSet stripe = MaskSet::where(ScalarField::sample(g, [](double x, double) { return x; }),
                                          [](double x) { return x < 0.5; });
    EXPECT_EQ(boundary_annulus_area(stripe, 0.0), 0.0);
    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double a = boundary_annulus_area(stripe, k * g.h());
        // k columns added on each side, k-1 removed on each side
        EXPECT_NEAR(a, (4 * k - 2) * g.h(), 1e-12);
        EXPECT_LE(a, 4.5 * k * g.h());
        EXPECT_GE(a, prev);
        prev = a;
    }
}

TEST(BoundaryAnnulus, CheckerboardIsIrregular) {
    const TorusGrid g(64);
    MaskSet board(g);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) board.set(i, j, ((i / 2) + (j / 2)) % 2 == 0);
    EXPECT_GT(boundary_annulus_area(board, 2 * g.h()), 0.5);
    EXPECT_THROW(boundary_annulus_area(MaskSet(g, true), g.h()), Error);
}

TEST(BoundaryAnnulus, SubadditiveUnderUnion) {
    const TorusGrid g(32);
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const MaskSet a = oracle::random_blobs(g, rng, 1), c = oracle::random_blobs(g, rng, 1);
        if ((a | c).full()) continue;
        for (int k : {1, 3}) {
            const double d = k * g.h();
            EXPECT_LE(boundary_annulus_area(a | c, d),
                      boundary_annulus_area(a, d) + boundary_annulus_area(c, d) + 1e-12);
        }
    }
}
