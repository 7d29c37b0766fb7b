#include "horoforge/geometries/torus.hpp"
#include "horoforge/metric/metric_engine.hpp"
#include "horoforge/oracles/grid_extremal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace horoforge::geometry {
namespace {

const double kHalfLog2 = 0.5 * std::log(2.0);

SL2Z random_element(std::mt19937_64& rng) {
    const SL2Z s{0, -1, 1, 0};
    const SL2Z t{1, 1, 0, 1};
    SL2Z m;
    std::uniform_int_distribution<int> pick(0, 2);
    for (int k = 0; k < 5; ++k) {
        const int c = pick(rng);
        m = m * (c == 0 ? s : c == 1 ? t : t.inverse());
    }
    return m;
}

TEST(FlatLength, Examples) {
    EXPECT_DOUBLE_EQ(torus_flat_length(Complex(0, 1), SlopeCurrent::single(1, 0)), 1.0);
    EXPECT_NEAR(torus_flat_length(Complex(0, 2), SlopeCurrent::single(1, 0)), 1.0 / std::sqrt(2.0), 1e-15);
    const SlopeCurrent c({{1, 2, 0.7}, {-3, 1, 1.1}});
    const Complex tau(0.3, 1.4);
    EXPECT_NEAR(torus_flat_length(tau, c.scaled(2.0)), 2.0 * torus_flat_length(tau, c), 1e-14);
}

TEST(ExtremalLength, Examples) {
    EXPECT_DOUBLE_EQ(torus_extremal_length(Complex(0, 1), SlopeCurrent::single(1, 0)), 1.0);
    EXPECT_NEAR(torus_extremal_length(Complex(0, 2), SlopeCurrent::single(0, 1)), 2.0, 1e-15);
    const SlopeCurrent c({{1, 2, 0.7}, {-3, 1, 1.1}});
    const Complex tau(-0.6, 0.9);
    EXPECT_NEAR(torus_extremal_length(tau, c.scaled(2.0)), 4.0 * torus_extremal_length(tau, c), 1e-13);
}

TEST(ExtremalLength, SquareOfFlatLengthForOneSlope) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 100; ++k) {
        const Complex tau(u(rng), std::abs(u(rng)) + 0.1);
        const SlopeCurrent c = SlopeCurrent::single(u(rng), u(rng), std::abs(u(rng)) + 0.1);
        const double flat = torus_flat_length(tau, c);
        EXPECT_DOUBLE_EQ(torus_extremal_length(tau, c), flat * flat);
    }
}

TEST(Intersection, Examples) {
    EXPECT_EQ(torus_intersection(SlopeCurrent::single(1, 0), SlopeCurrent::single(0, 1)), 1.0);
    const SlopeCurrent c = SlopeCurrent::single(2, 3, 1.5);
    EXPECT_EQ(torus_intersection(c, c), 0.0);
    const SlopeCurrent a({{1, 2, 0.5}, {3, -1, 2.0}});
    const SlopeCurrent b({{0, 1, 1.25}, {5, 2, 0.75}});
    EXPECT_DOUBLE_EQ(torus_intersection(a.scaled(2.0), b.scaled(3.0)), 6.0 * torus_intersection(a, b));
}

TEST(Intersection, ExactlyInvariantOnIntegerSlopes) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> u(-6, 6);
    for (int k = 0; k < 200; ++k) {
        const SL2Z m = random_element(rng);
        const SlopeCurrent a = SlopeCurrent::single(u(rng), 7, 1.0);
        const SlopeCurrent b = SlopeCurrent::single(5, u(rng), 2.0);
        EXPECT_EQ(torus_intersection(act_on_slopes(m, a), act_on_slopes(m, b)), torus_intersection(a, b));
    }
}

TEST(ExtremalLength, InvariantUnderSL2Z) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 200; ++k) {
        const SL2Z m = random_element(rng);
        const Complex tau(u(rng), std::abs(u(rng)) + 0.2);
        const SlopeCurrent c({{u(rng), u(rng), 1.0}, {u(rng), u(rng), 0.5}});
        const double before = torus_extremal_length(tau, c);
        EXPECT_NEAR(torus_extremal_length(mobius(m, tau), act_on_slopes(m, c)), before, 1e-9 * before);
    }
}

TEST(MinskyInequality, OrthogonalPairsAreEqualityCases) {
    EXPECT_NEAR(minsky_inequality_gap(Complex(0, 1), SlopeCurrent::single(1, 0), SlopeCurrent::single(0, 1)), 0.0,
                1e-15);
    EXPECT_NEAR(minsky_inequality_gap(Complex(0, 2), SlopeCurrent::single(1, 0), SlopeCurrent::single(0, 1)), 0.0,
                1e-15);
}

TEST(MinskyInequality, StrictForTwoAtomCurrents) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 100; ++k) {
        const Complex tau(u(rng), std::abs(u(rng)) + 0.2);
        const SlopeCurrent g({{1, 0, 1.0}, {1, 1, 1.0}});
        EXPECT_GT(minsky_inequality_gap(tau, SlopeCurrent::single(u(rng), u(rng)), g), 0.0);
    }
}

TEST(MinskyInequality, AlphaMustBeOneAtom) {
    EXPECT_THROW(minsky_inequality_gap(Complex(0, 1), SlopeCurrent({{1, 0, 1}, {0, 1, 1}}), SlopeCurrent::single(1, 1)),
                 InvalidPointError);
}

TEST(Systole, Examples) {
    EXPECT_NEAR(torus_systole(Complex(0, 1)), 1.0, 1e-15);
    EXPECT_NEAR(torus_systole(Complex(0, 2)), 1.0 / std::sqrt(2.0), 1e-15);
    // Hexagonal torus: shortest vectors 1, tau, tau - 1 all of modulus 1.
    const Complex hex(0.5, std::sqrt(3.0) / 2);
    EXPECT_NEAR(torus_systole(hex), 1.0 / std::sqrt(hex.imag()), 1e-14);
}

TEST(Systole, InvariantUnderSL2Z) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 100; ++k) {
        const Complex tau(u(rng), std::abs(u(rng)) + 0.05);
        const SL2Z m = random_element(rng);
        EXPECT_NEAR(torus_systole(mobius(m, tau)), torus_systole(tau), 1e-9 * torus_systole(tau));
    }
}

TEST(SL2ZAction, Basics) {
    EXPECT_THROW(SL2Z::checked(2, 0, 0, 1), InvalidPointError);
    EXPECT_THROW(SL2Z::from_group_data({1, 0.5, 0, 1}), InvalidPointError);
    EXPECT_THROW(SL2Z::from_group_data({1, 0, 0}), InvalidPointError);
    EXPECT_EQ(SL2Z::from_group_data({2, 1, 1, 1}), (SL2Z{2, 1, 1, 1}));
    const SL2Z cat{2, 1, 1, 1};
    EXPECT_NEAR(cat.top_eigenvalue(), (3.0 + std::sqrt(5.0)) / 2.0, 1e-15);
    EXPECT_EQ(cat.power(3), cat * cat * cat);
    EXPECT_EQ(cat.power(-1), (SL2Z{1, -1, -1, 2}));
}

TEST(SL2ZAction, IdentityActsTrivially) {
    const GroupElement g = sl2z_action(SL2Z{});
    EXPECT_EQ(std::get<Complex>(g.act_m(Complex(0.3, 1.2))), Complex(0.3, 1.2));
    EXPECT_EQ(std::get<SlopeCurrent>(g.act_n(SlopeCurrent::single(2, 3))), SlopeCurrent::single(2, 3));
}

TEST(SL2ZAction, ParabolicFixesHeight) {
    const Complex moved = std::get<Complex>(sl2z_action(SL2Z{1, 1, 0, 1}).act_m(Complex(0.25, 1.75)));
    EXPECT_EQ(moved.imag(), 1.75);
    EXPECT_EQ(moved.real(), 1.25);
}

TEST(SL2ZAction, InverseUndoes) {
    const GroupElement g = sl2z_action(SL2Z{3, 2, 1, 1});
    const Complex back = std::get<Complex>(g.inverse().act_m(g.act_m(Complex(-0.4, 0.6))));
    EXPECT_NEAR(back.real(), -0.4, 1e-14);
    EXPECT_NEAR(back.imag(), 0.6, 1e-14);
}

TEST(SL2ZAction, AxisApexIsTranslatedByTwiceLogLambda) {
    for (const SL2Z& m : {SL2Z{2, 1, 1, 1}, SL2Z{3, 2, 1, 1}, SL2Z{5, 2, 2, 1}}) {
        const Complex apex = axis_apex(m);
        EXPECT_NEAR(hyperbolic_distance(apex, mobius(m, apex)), 2.0 * std::log(m.top_eigenvalue()), 1e-12);
    }
    EXPECT_THROW(axis_apex(SL2Z{1, 1, 0, 1}), InvalidPointError);
}

TEST(Liouville, SquareTorusFit) {
    const LiouvilleFit fit = liouville_discretize(Complex(0, 1), 64);
    EXPECT_LE(fit.residual, 1e-2);
    EXPECT_LE(fit.current.size(), 64u);
    // (1,0) lies between validation directions, so allow more than the grid residual.
    EXPECT_NEAR(torus_intersection(fit.current, SlopeCurrent::single(1, 0)), 1.0, 1e-3);
    EXPECT_EQ(liouville_residual(Complex(0, 1), fit.current), fit.residual);
}

TEST(Liouville, Equivariance) {
    const Complex x(0.3, 1.3);
    const SL2Z m{2, 1, 1, 1};
    const LiouvilleFit here = liouville_discretize(x, 64);
    const LiouvilleFit there = liouville_discretize(mobius(m, x), 64);
    const double tolerance = 2.0 * std::max(here.residual, there.residual);
    for (double theta = 0.05; theta < std::numbers::pi; theta += 0.3) {
        const SlopeCurrent gamma = SlopeCurrent::single(std::cos(theta), std::sin(theta));
        const double a = torus_intersection(there.current, act_on_slopes(m, gamma));
        const double b = torus_intersection(here.current, gamma);
        EXPECT_NEAR(a, b, tolerance * torus_flat_length(x, gamma));
    }
}

TEST(Liouville, TransportMatchesDirectFit) {
    const LiouvilleFit at_i = liouville_discretize(Complex(0, 1), 64);
    for (const Complex tau : {Complex(0.7, 1.9), Complex(-0.4, 0.5), Complex(0, 3)}) {
        const double transported = liouville_residual(tau, liouville_transport(at_i, tau));
        const double direct = liouville_discretize(tau, 64).residual;
        EXPECT_LE(transported, 1e-2);
        EXPECT_LE(transported, 2.0 * direct + 1e-6) << tau;
    }
}

TEST(Liouville, NeedsEightDirections) { EXPECT_THROW(liouville_discretize(Complex(0, 1), 4), InvalidPointError); }

TEST(TorusBifunctionals, E1SquareToTall) {
    const DistanceEstimate d =
        distance(make_torus_bifunctional(TorusKind::e1), Complex(0, 1), Complex(0, 2), SearchConfig{});
    EXPECT_NEAR(d.lower_bound, kHalfLog2, 1e-9);
    ASSERT_TRUE(d.oracle_value);
    EXPECT_NEAR(*d.oracle_value, kHalfLog2, 1e-15);
}

TEST(TorusBifunctionals, ThurstonSquareToTall) {
    EXPECT_NEAR(distance(make_torus_bifunctional(TorusKind::thurston_like), Complex(0, 1), Complex(0, 2), SearchConfig{})
                    .lower_bound,
                kHalfLog2, 1e-9);
}

TEST(TorusBifunctionals, E2LowerBound) {
    const double e2 =
        distance(make_torus_bifunctional(TorusKind::e2), Complex(0, 1), Complex(0, 2), SearchConfig{}).lower_bound;
    EXPECT_GE(e2, kHalfLog2 - 2e-2);
}

TEST(TorusBifunctionals, E2EvaluatesThroughTheFit) {
    const Bifunctional e2 = make_torus_bifunctional(TorusKind::e2);
    const LiouvilleFit fit = liouville_discretize(Complex(0, 1), 64);
    EXPECT_NEAR(evaluate(e2, Complex(0, 1), Complex(0, 1)), 0.5 * std::log(torus_extremal_length(Complex(0, 1), fit.current)),
                1e-12);
}

TEST(GridOracle, StencilDirections) {
    EXPECT_TRUE(oracles::is_stencil_direction(1, 0));
    EXPECT_TRUE(oracles::is_stencil_direction(-2, 1));
    EXPECT_FALSE(oracles::is_stencil_direction(2, 2));
    EXPECT_FALSE(oracles::is_stencil_direction(3, 1));
    EXPECT_FALSE(oracles::is_stencil_direction(0, 0));
}

TEST(GridOracle, FlatFactorReproducesTheFormula) {
    const std::vector<oracles::GridCurve> curves{{1, 1, 0.8}, {2, -1, 1.3}};
    const Complex tau(0.2, 1.1);
    const double formula = torus_extremal_length(tau, SlopeCurrent({{1, 1, 0.8}, {2, -1, 1.3}}));
    const std::size_t n = 24;
    EXPECT_NEAR(oracles::grid_ratio(tau, curves, std::vector<double>(n * n, 1.0), n), formula, 1e-12 * formula);
}

TEST(GridOracle, RandomFactorsNeverBeatTheFormula) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.2, 1.8);
    const Complex tau(-0.3, 0.9);
    const std::vector<oracles::GridCurve> curves{{0, 1, 1.0}};
    const double formula = torus_extremal_length(tau, SlopeCurrent::single(0, 1));
    const std::size_t n = 16;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> rho(n * n);
        for (double& r : rho) r = u(rng);
        EXPECT_LE(oracles::grid_ratio(tau, curves, rho, n), formula * (1.0 + 1e-12));
    }
}

TEST(GridOracle, SmallOptimizationApproachesTheFormula) {
    oracles::GridExtremalConfig config;
    config.n = 16;
    config.iterations = 60;
    const oracles::GridExtremalResult r = oracles::grid_extremal_length(Complex(0, 1), {{1, 0, 1.0}}, config);
    EXPECT_NEAR(r.flat_ratio, 1.0, 1e-12);
    EXPECT_LE(r.best_ratio, 1.0 + 1e-9);
    EXPECT_GT(r.best_ratio, r.initial_ratio);
    EXPECT_GT(r.best_ratio, 0.97);
}

} // namespace
} // namespace horoforge::geometry
