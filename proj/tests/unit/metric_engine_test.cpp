#include "horoforge/geometries/euclidean.hpp"
#include "horoforge/geometries/funk.hpp"
#include "horoforge/geometries/minsky.hpp"
#include "horoforge/geometries/torus.hpp"
#include "horoforge/metric/metric_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace horoforge {
namespace {

const double kLog2 = std::log(2.0);

geometry::ConvexPolytope square() {
    return geometry::ConvexPolytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
}

double norm_distance(const Point& a, const Point& b) {
    const auto& x = std::get<RealVector>(a);
    const auto& y = std::get<RealVector>(b);
    return std::hypot(x[0] - y[0], x[1] - y[1]);
}

TEST(DistanceOnWitnesses, EuclideanPicksTheAlignedWitness) {
    const WitnessSet w{{RealVector{1, 0}, RealVector{-1, 0}, RealVector{0, 1}, RealVector{0, -1},
                        RealVector{-0.6, -0.8}}};
    const DistanceEstimate d =
        distance_on_witnesses(geometry::euclidean_inner(2), RealVector{0, 0}, RealVector{3, 4}, w);
    EXPECT_NEAR(d.lower_bound, 5.0, 1e-15);
    EXPECT_EQ(d.argmax_index, 4u);
    EXPECT_EQ(std::get<RealVector>(d.argmax_witness), (RealVector{-0.6, -0.8}));
    EXPECT_EQ(d.witness_count, 5u);
}

TEST(DistanceOnWitnesses, SamePointIsZero) {
    const WitnessSet w{{RealParameter{0}, RealParameter{3}, RealParameter{-7}}};
    EXPECT_EQ(distance_on_witnesses(geometry::minsky_half_plane(), Complex(0.4, 2), Complex(0.4, 2), w).lower_bound,
              0.0);
}

TEST(DistanceOnWitnesses, MinskySingleWitness) {
    const WitnessSet w{{RealParameter{0}}};
    EXPECT_NEAR(distance_on_witnesses(geometry::minsky_half_plane(), Complex(0, 2), Complex(0, 1), w).lower_bound,
                kLog2, 1e-15);
}

TEST(DistanceOnWitnesses, LowerBoundIsAttainedDifference) {
    const Bifunctional minsky = geometry::minsky_half_plane();
    const WitnessSet w{{RealParameter{0.5}, RealParameter{-2}, RealParameter{9}}};
    const DistanceEstimate d = distance_on_witnesses(minsky, Complex(1, 0.5), Complex(-1, 3), w);
    EXPECT_EQ(d.lower_bound,
              evaluate(minsky, Complex(1, 0.5), d.argmax_witness) - evaluate(minsky, Complex(-1, 3), d.argmax_witness));
}

TEST(DistanceOnWitnesses, TiesGoToSmallestIndex) {
    const WitnessSet w{{RealVector{0, 1}, RealVector{0, 2}, RealVector{0, 1}}};
    const DistanceEstimate d =
        distance_on_witnesses(geometry::euclidean_inner(2), RealVector{0, 1}, RealVector{0, 0}, w);
    EXPECT_EQ(d.argmax_index, 0u);
}

TEST(DistanceOnWitnesses, EmptySetRejected) {
    EXPECT_THROW(distance_on_witnesses(geometry::minsky_half_plane(), Complex(0, 1), Complex(0, 2), WitnessSet{}),
                 Error);
}

TEST(RefineWitnesses, MinskyClimbsToTheSupremum) {
    SearchConfig config;
    const Refinement r = refine_witnesses(geometry::minsky_half_plane(), Complex(0, 2), Complex(0, 1),
                                          WitnessSet{{RealParameter{5}}}, config);
    EXPECT_NEAR(r.estimate.lower_bound, kLog2, 1e-6);
    EXPECT_GT(r.witnesses.points.size(), 1u);
    EXPECT_EQ(r.witnesses.provenance, WitnessProvenance::refined);
}

TEST(RefineWitnesses, FunkFacetsAreDiscrete) {
    const Bifunctional funk = geometry::funk_polytope(square());
    const WitnessSet w{{FacetIndex{0}, FacetIndex{2}}};
    const Refinement r = refine_witnesses(funk, RealVector{0, 0}, RealVector{0.5, 0}, w, SearchConfig{});
    EXPECT_FALSE(r.estimate.refinement_supported);
    EXPECT_EQ(r.witnesses.points, w.points);
}

TEST(RefineWitnesses, TorusE1FromEightDirections) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    WitnessSet w;
    for (int k = 0; k < 8; ++k) {
        const double theta = std::numbers::pi * k / 8;
        w.points.emplace_back(SlopeCurrent::single(std::cos(theta), std::sin(theta)));
    }
    const Refinement r = refine_witnesses(e1, Complex(0, 1), Complex(0, 2), w, SearchConfig{});
    EXPECT_NEAR(r.estimate.lower_bound, 0.5 * kLog2, 1e-9);
}

TEST(RefineWitnesses, NeverDecreasesTheEstimate) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const WitnessSet w{{SlopeCurrent::single(1, 3), SlopeCurrent::single(-2, 1)}};
    const Point x = Complex(0.7, 0.6);
    const Point y = Complex(-0.4, 2.3);
    const double before = distance_on_witnesses(e1, x, y, w).lower_bound;
    EXPECT_GE(refine_witnesses(e1, x, y, w, SearchConfig{}).estimate.lower_bound, before);
}

TEST(Distance, EuclideanMatchesNorm) {
    const DistanceEstimate d = distance(geometry::euclidean_inner(2), RealVector{0, 0}, RealVector{3, 4}, SearchConfig{});
    EXPECT_NEAR(d.lower_bound, 5.0, 1e-6);
    ASSERT_TRUE(d.oracle_value);
    EXPECT_DOUBLE_EQ(*d.oracle_value, 5.0);
}

TEST(Distance, MinskyIsSymmetricOnThisPair) {
    const Bifunctional minsky = geometry::minsky_half_plane();
    EXPECT_NEAR(distance(minsky, Complex(0, 1), Complex(0, 2), SearchConfig{}).lower_bound, kLog2, 1e-6);
    EXPECT_NEAR(distance(minsky, Complex(0, 2), Complex(0, 1), SearchConfig{}).lower_bound, kLog2, 1e-6);
}

TEST(Distance, FunkSquare) {
    const DistanceEstimate d =
        distance(geometry::funk_polytope(square()), RealVector{0, 0}, RealVector{0.5, 0}, SearchConfig{});
    EXPECT_NEAR(d.lower_bound, kLog2, 1e-12);
    ASSERT_TRUE(d.oracle_value);
    EXPECT_NEAR(*d.oracle_value, kLog2, 1e-12);
}

TEST(Distance, DeterministicForAFixedSeed) {
    const Bifunctional thurston = geometry::make_torus_bifunctional(geometry::TorusKind::thurston_like);
    SearchConfig config;
    config.seed = 99;
    const DistanceEstimate a = distance(thurston, Complex(0.2, 1.1), Complex(-0.3, 0.8), config);
    const DistanceEstimate b = distance(thurston, Complex(0.2, 1.1), Complex(-0.3, 0.8), config);
    EXPECT_EQ(a.lower_bound, b.lower_bound);
    EXPECT_EQ(a.argmax_witness, b.argmax_witness);
    EXPECT_EQ(a.refinement_iterations, b.refinement_iterations);
}

TEST(Distance, OracleGapIsNonnegative) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-2, 2);
    std::uniform_real_distribution<double> im(0.3, 3);
    const Bifunctional minsky = geometry::minsky_half_plane();
    for (int k = 0; k < 30; ++k) {
        const DistanceEstimate d =
            distance(minsky, Complex(re(rng), im(rng)), Complex(re(rng), im(rng)), SearchConfig{});
        EXPECT_GE(*d.oracle_gap(), -1e-12);
    }
}

TEST(Distance, InvalidConfigRejected) {
    SearchConfig config;
    config.step_shrink = 1.0;
    EXPECT_THROW(distance(geometry::minsky_half_plane(), Complex(0, 1), Complex(0, 2), config), Error);
}

TEST(WitnessMetric, MonotoneInTheWitnessSet) {
    const Bifunctional minsky = geometry::minsky_half_plane();
    WitnessSet w{{RealParameter{4}}};
    double previous = distance_on_witnesses(minsky, Complex(0, 2), Complex(1, 1), w).lower_bound;
    for (double t : {-1.0, 0.3, 2.0, -5.0}) {
        w.points.emplace_back(RealParameter{t});
        const double current = distance_on_witnesses(minsky, Complex(0, 2), Complex(1, 1), w).lower_bound;
        EXPECT_GE(current, previous);
        previous = current;
    }
}

TEST(Symmetrize, TakesTheMaximum) {
    EXPECT_EQ(symmetrize(std::log(2.0), std::log(3.0)), std::log(3.0));
    EXPECT_EQ(symmetrize(0.0, 0.0), 0.0);
}

TEST(Symmetrize, TorusE2Pair) {
    const Bifunctional e2 = geometry::make_torus_bifunctional(geometry::TorusKind::e2);
    const double forward = distance(e2, Complex(0, 1), Complex(1, 1), SearchConfig{}).lower_bound;
    const double backward = distance(e2, Complex(1, 1), Complex(0, 1), SearchConfig{}).lower_bound;
    EXPECT_EQ(symmetrize(forward, backward), std::max(forward, backward));
    EXPECT_GT(symmetrize(forward, backward), 0.0);
}

TEST(TriangleDeviation, MetricWithTargetAmongWitnesses) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4, 4);
    const Bifunctional metric = geometry::euclidean_metric(2);
    for (int k = 0; k < 50; ++k) {
        const RealVector x{u(rng), u(rng)};
        const RealVector y{u(rng), u(rng)};
        const WitnessSet w{{RealVector{u(rng), u(rng)}, y, RealVector{u(rng), u(rng)}}};
        EXPECT_NEAR(triangle_deviation(metric, x, y, w), 0.0, 1e-9);
    }
}

TEST(TriangleDeviation, SquaredDistanceIsStrictlyNegative) {
    Bifunctional squared = geometry::euclidean_metric(2);
    squared.eval = [](const Point& a, const Point& b) {
        const double d = norm_distance(a, b);
        return d * d;
    };
    // I(x,y) = 4; the witness (3,0) gives I(x,z) - I(y,z) = 9 - 1 = 8.
    const WitnessSet w{{RealVector{1, 0}, RealVector{3, 0}}};
    EXPECT_DOUBLE_EQ(triangle_deviation(squared, RealVector{0, 0}, RealVector{2, 0}, w), -4.0);
}

TEST(TriangleDeviation, SamePointGivesSelfValue) {
    Bifunctional shifted = geometry::euclidean_metric(2);
    shifted.eval = [](const Point& a, const Point& b) { return norm_distance(a, b) + 1.5; };
    const WitnessSet w{{RealVector{1, 0}}};
    EXPECT_DOUBLE_EQ(triangle_deviation(shifted, RealVector{0, 2}, RealVector{0, 2}, w), 1.5);
}

TEST(TriangleDeviation, RequiresEqualFactors) {
    EXPECT_THROW(triangle_deviation(geometry::minsky_half_plane(), Complex(0, 1), Complex(0, 1),
                                    WitnessSet{{RealParameter{0}}}),
                 DomainMismatchError);
}

TEST(ExtendToCompletion, ConstantSequence) {
    const Bifunctional inner = geometry::euclidean_inner(2);
    const CauchySequence seq{[](std::size_t) { return Point(RealVector{0.3, -2}); }, norm_distance};
    const auto values = extend_to_completion(inner, seq, 5, 1e-9, {RealVector{0, 1}});
    ASSERT_EQ(values.size(), 1u);
    EXPECT_TRUE(values[0].converged);
    EXPECT_EQ(values[0].value, -2.0);
}

TEST(ExtendToCompletion, EuclideanDyadicApproach) {
    const Bifunctional inner = geometry::euclidean_inner(2);
    const CauchySequence seq{[](std::size_t k) { return Point(RealVector{1.0 - std::ldexp(1.0, -static_cast<int>(k)), 0}); },
                             norm_distance};
    const auto values = extend_to_completion(inner, seq, 40, 1e-9, {RealVector{1, 0}});
    EXPECT_TRUE(values[0].converged);
    EXPECT_NEAR(values[0].value, 1.0, 1e-8);
}

TEST(ExtendToCompletion, AlternatingSequenceIsNotCauchy) {
    const Bifunctional inner = geometry::euclidean_inner(2);
    const CauchySequence seq{[](std::size_t k) { return Point(RealVector{k % 2 == 0 ? 0.0 : 10.0, 0}); },
                             norm_distance};
    try {
        extend_to_completion(inner, seq, 10, 1e-6, {RealVector{1, 0}});
        FAIL() << "expected NotCauchyError";
    } catch (const NotCauchyError& e) {
        EXPECT_LT(e.first_index, e.second_index);
    }
}

} // namespace
} // namespace horoforge
