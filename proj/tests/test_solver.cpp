#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "polar/experiments.hpp"
#include "polar/solver.hpp"

using namespace polar;

namespace {

SolverParams params(double eps, double dt, double T, Scheme s = Scheme::Imex) {
    SolverParams p;
    p.eps = eps;
    p.dt = dt;
    p.T = T;
    p.L0 = 1.0;
    p.scheme = s;
    p.record_every = 1;
    return p;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST(MmRate, Values) {
    EXPECT_EQ(mm_rate(0.0, 1e-3), 0.0);
    EXPECT_DOUBLE_EQ(mm_rate(1e-3, 1e-3), 0.5);
    EXPECT_LT(mm_rate(1.0, 1e-3), 1.0);
}

TEST(StepRegularized, HomogeneousStateIsFixedPoint) {
    const TorusGrid grid(16);
    const Coefficient g(ScalarField(grid, 0.4), 0.4, 0.4);
    for (Scheme s : {Scheme::Imex, Scheme::Explicit}) {
        const ScalarField u(grid, 0.3);
        const SolverParams p = params(1e-2, 0.25 / (16.0 * 16.0), 1.0, s);
        const StepResult r = step_regularized(u, g, p);
        for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(r.u[k], u[k], 1e-15);
        // alpha = (1-g) f / g, so lambda = g / (g + (1-g) f)
        const double f = mm_rate(0.3, 1e-2);
        EXPECT_NEAR(r.alpha, 0.6 * f / 0.4, 1e-14);
        EXPECT_NEAR(r.lambda, 1 / (1 + r.alpha), 1e-15);
    }
}

TEST(StepRegularized, MassDriftOverThousandSteps) {
    const TorusGrid grid(32);
    std::mt19937_64 rng(61);
    const Coefficient g = Coefficient::tight(oracle::random_field(grid, rng, 0.2, 0.8));
    ScalarField u = oracle::random_field(grid, rng, 0.0, 1.0);
    for (std::size_t k = 0; k < u.size(); k += 3) u[k] = 0.0;
    const double m0 = integrate(u);
    const SolverParams p = params(1e-3, 0.25 / (32.0 * 32.0), 1.0);
    for (int s = 0; s < 1000; ++s) u = step_regularized(u, g, p).u;
    EXPECT_LT(std::abs(integrate(u) - m0) / m0, 1e-10);
    EXPECT_GE(u.min(), 0.0);
}

TEST(StepRegularized, FirstOrderInTime) {
    // Richardson: successive differences of the end state halve with dt.
    const Scenario sc = preset_scenario("continuity", 32);
    const double T = 2e-3;
    std::vector<ScalarField> ends;
    for (int level = 0; level < 4; ++level) {
        const double dt = 2e-4 / (1 << level);
        SolverParams p = params(1e-2, dt, T);
        p.record_every = 1 << 20;
        ScalarField u = sc.data.u0;
        for (int s = 0; s < p.steps(); ++s) u = step_regularized(u, sc.g, p).u;
        ends.push_back(u);
    }
    const double e1 = max_abs_diff(ends[0], ends[1]);
    const double e2 = max_abs_diff(ends[1], ends[2]);
    const double e3 = max_abs_diff(ends[2], ends[3]);
    EXPECT_NEAR(e1 / e2, 2.0, 0.4);
    EXPECT_NEAR(e2 / e3, 2.0, 0.3);
}

TEST(StepRegularized, ImplicitDiffusionMatchesHeatSolve) {
    const TorusGrid grid(16);
    std::mt19937_64 rng(67);
    const Coefficient g(ScalarField(grid, 0.5), 0.5, 0.5);
    // with eps huge the reaction is a tiny constant-free perturbation
    const ScalarField u = oracle::random_field(grid, rng, 0.0, 1.0);
    const SolverParams p = params(1e12, 1e-3, 1.0);
    const StepResult r = step_regularized(u, g, p);
    const ScalarField w = implicit_heat_solve(u, 1e-3);
    EXPECT_LT(max_abs_diff(r.u, w), 1e-12);
}

TEST(StepRegularized, NegativityBreach) {
    const TorusGrid grid(16);
    ScalarField u(grid);
    u.at(4, 4) = 1.0;
    const Coefficient g(ScalarField(grid, 0.5), 0.5, 0.5);
    SolverParams p = params(1e-3, 10.0 / (16.0 * 16.0), 1.0, Scheme::Explicit);
    try {
        step_regularized(u, g, p);
        FAIL() << "expected NegativityBreach";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativityBreach);
    }
}

TEST(SolverParams, ValidationAndDefaults) {
    const TorusGrid grid(32);
    const Coefficient g(ScalarField(grid, 0.5), 0.25, 0.75);
    SolverParams p;
    const SolverParams r = p.resolved(grid, g);
    EXPECT_DOUBLE_EQ(r.dt, 0.25 / (32.0 * 32.0));
    EXPECT_DOUBLE_EQ(r.L0, 4 * 0.75 / 0.25);
    EXPECT_DOUBLE_EQ(SolverParams::default_L0(0.3, 0.2, 0.0), 4 * 0.7 / 0.2 - 1);
    EXPECT_DOUBLE_EQ(SolverParams::default_L0(0.3, 0.2, 100.0), 200.0);

    SolverParams bad = r;
    bad.scheme = Scheme::Explicit;
    bad.dt = 0.3 / (32.0 * 32.0);
    EXPECT_THROW(bad.validate(grid), Error);
    bad.dt = 0.25 / (32.0 * 32.0);
    EXPECT_NO_THROW(bad.validate(grid));
    bad.T = -1;
    EXPECT_THROW(bad.validate(grid), Error);
    bad = r;
    bad.record_every = 0;
    EXPECT_THROW(bad.validate(grid), Error);
    EXPECT_THROW(parse_scheme("crank"), Error);
    EXPECT_EQ(parse_scheme("explicit"), Scheme::Explicit);
}

TEST(SupportOf, Examples) {
    const TorusGrid grid(16);
    const SolverParams p = params(1e-3, 1e-4, 0.0);
    EXPECT_TRUE(support_of(ScalarField(grid), p).empty());
    std::mt19937_64 rng(71);
    const ScalarField u = oracle::random_field(grid, rng, 0.0, 2e-3);
    const MaskSet s = support_of(u, p);
    for (std::size_t k = 0; k < u.size(); ++k) EXPECT_EQ(s[k], u[k] > 1e-3);
    // scaling covariance
    ScalarField cu = u;
    cu *= 7.0;
    SolverParams q = p;
    q.L0 = 7.0;
    EXPECT_EQ(support_of(cu, q), s);
}

TEST(RunRegularized, ZeroHorizonGivesOneRecord) {
    const Scenario sc = preset_scenario("continuity", 32);
    const PreparedRun run = prepare_run(sc.data, sc.g, SolverParams{.eps = 1e-4, .T = 0.0}, 1e-4);
    const Trajectory tr = run_regularized(run.u, sc.g, run.params);
    ASSERT_EQ(tr.size(), 1u);
    EXPECT_EQ(tr.times[0], 0.0);
    EXPECT_NEAR(tr.lambda[0], sc.data.lambda0, 5e-3);
    EXPECT_EQ(tr.support_masks[0].second, support_of(run.u, run.params));
}

TEST(RunRegularized, RecordsAndCsv) {
    const Scenario sc = preset_scenario("continuity", 32);
    SolverParams p;
    p.eps = 1e-2;
    p.T = 23 * 0.25 / (32.0 * 32.0);
    p.record_every = 5;
    p.snapshot_every = 2;
    const PreparedRun run = prepare_run(sc.data, sc.g, p, 1e-2);
    int calls = 0;
    const Trajectory tr = run_regularized(run.u, sc.g, run.params, [&](const RecordView&) { ++calls; });
    // steps 0, 5, 10, 15, 20 and the final 23
    ASSERT_EQ(tr.size(), 6u);
    EXPECT_EQ(calls, 6);
    EXPECT_EQ(tr.snapshots.size(), 3u);
    for (double m : tr.mass) EXPECT_NEAR(m, tr.mass[0], 1e-14);
    std::ostringstream os;
    tr.write_csv(os);
    const std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,lambda,alpha,mass,support_area,hausdorff_to_initial");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(StepClassical, ZeroSourceIsHeatStep) {
    const TorusGrid grid(16);
    std::mt19937_64 rng(73);
    const ScalarField u = oracle::random_field(grid, rng, 0.0, 1.0);
    const SolverParams p = params(1e-3, 1e-3, 1.0);
    const ScalarField a = step_classical(u, ClassicalSource::constant(ScalarField(grid)), 0.0, p);
    const ScalarField b = implicit_heat_solve(u, 1e-3);
    for (std::size_t k = 0; k < u.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(StepClassical, NegativeSourceShrinksSupport) {
    const TorusGrid grid(64);
    // contact c (R - r)^2 with 2c < 1: the source beats the inward curvature at
    // the rim. Steeper edges (or a sharp plateau) first advance before retreating.
    const ScalarField u0 = ScalarField::sample(grid, [](double x, double y) {
        const double s = std::max(0.3 - std::hypot(x - 0.5, y - 0.5), 0.0);
        return 0.1 * s * s;
    });
    SolverParams p = params(1e-6, 0.25 / (64.0 * 64.0), 0.012);
    p.record_every = 10;
    const ClassicalTrajectory tr = run_classical(u0, ClassicalSource::constant(ScalarField(grid, -1.0)), p);
    for (std::size_t k = 1; k < tr.support_area.size(); ++k) EXPECT_LE(tr.support_area[k], tr.support_area[k - 1]);
    EXPECT_LT(tr.support_area.back(), tr.support_area.front());
    for (std::size_t k = 1; k < tr.mass.size(); ++k) EXPECT_LE(tr.mass[k], tr.mass[k - 1] + 1e-15);
}

TEST(StepClassical, PositiveSourceSeedsSupport) {
    const TorusGrid grid(64);
    const ScalarField u0 = disk_bump(grid, 0.25, 0.25, 0.1);
    const ScalarField f = ScalarField::sample(grid, [](double x, double y) {
        return std::hypot(x - 0.7, y - 0.7) < 0.1 ? 0.5 : -0.5;
    });
    const MaskSet region = MaskSet::positive(f);
    ASSERT_TRUE((region & MaskSet::positive(u0)).empty());
    SolverParams p = params(1e-6, 0.25 / (64.0 * 64.0), 5 * 0.25 / (64.0 * 64.0));
    const ClassicalTrajectory tr = run_classical(u0, ClassicalSource::constant(f), p);
    ASSERT_EQ(tr.support_masks.size(), 6u);
    EXPECT_TRUE((tr.support_masks[0].second & region).empty());
    for (std::size_t k = 1; k < tr.support_masks.size(); ++k) EXPECT_FALSE((tr.support_masks[k].second & region).empty());
}

TEST(RunApproxSequence, OrderingIsPreserved) {
    const Scenario sc = preset_scenario("jump", 32);
    const JumpSequence seq = build_jump_sequence(sc.data, sc.g, JumpSequenceParams{0.06, 0.45, 2});
    SolverParams p;
    p.eps = 1e-3;
    p.T = 50 * 0.25 / (32.0 * 32.0);
    p.L0 = 1.0;
    p.dt = 0.25 / (32.0 * 32.0);
    p.snapshot_every = 1;
    const auto trs = run_approx_sequence(seq.members, sc.g, p);
    ASSERT_EQ(trs.size(), 2u);
    ASSERT_EQ(trs[0].snapshots.size(), trs[1].snapshots.size());
    for (std::size_t r = 0; r < trs[0].snapshots.size(); ++r) {
        const ScalarField& coarse = trs[0].snapshots[r].second;
        const ScalarField& fine = trs[1].snapshots[r].second;
        for (std::size_t k = 0; k < coarse.size(); ++k) EXPECT_LE(fine[k], coarse[k] + 1e-9);
    }
}
