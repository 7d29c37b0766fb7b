#include "horoforge/dynamics/dynamics.hpp"
#include "horoforge/geometries/euclidean.hpp"
#include "horoforge/geometries/minsky.hpp"
#include "horoforge/geometries/torus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace horoforge {
namespace {

using geometry::SL2Z;
using geometry::SlopeConvention;

const double kGoldenLog = std::log((3.0 + std::sqrt(5.0)) / 2.0);

std::vector<std::pair<Point, Point>> torus_samples(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-2, 2);
    std::uniform_real_distribution<double> im(0.3, 3);
    std::uniform_real_distribution<double> slope(-4, 4);
    std::uniform_real_distribution<double> weight(0.2, 2);
    std::vector<std::pair<Point, Point>> samples;
    for (int k = 0; k < count; ++k) {
        samples.emplace_back(Complex(re(rng), im(rng)),
                             SlopeCurrent({{slope(rng), slope(rng), weight(rng)}, {slope(rng), slope(rng), weight(rng)}}));
    }
    return samples;
}

std::shared_ptr<const LandmarkSet> torus_landmarks() {
    return std::make_shared<const LandmarkSet>(
        std::vector<Point>{Complex(0, 1), Complex(0, 2), Complex(1, 1), Complex(-0.5, 0.7)}, 0);
}

TEST(InvarianceDefect, IdentityIsZero) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    EXPECT_EQ(invariance_defect(e1, GroupElement::identity(), torus_samples(1, 20)), 0.0);
}

TEST(InvarianceDefect, TorusCatMap) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    EXPECT_LE(invariance_defect(e1, geometry::sl2z_action(SL2Z{2, 1, 1, 1}), torus_samples(2, 50)), 1e-9);
}

TEST(InvarianceDefect, EuclideanRotation) {
    const double c = std::cos(0.7);
    const double s = std::sin(0.7);
    const GroupElement g = geometry::euclidean_rotation(2, {c, -s, s, c});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<std::pair<Point, Point>> samples;
    for (int k = 0; k < 50; ++k) samples.emplace_back(RealVector{u(rng), u(rng)}, RealVector{u(rng), u(rng)});
    EXPECT_LE(invariance_defect(geometry::euclidean_inner(2), g, samples), 1e-12);
}

// The slope rule is pinned by this property: of the candidate linear rules,
// exactly one keeps the extremal-length bifunctional invariant.
TEST(SlopeConventionSelection, OnlyTheReflectedRuleIsInvariant) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const std::vector<SL2Z> elements{{2, 1, 1, 1}, {1, 1, 0, 1}, {0, -1, 1, 0}, {3, 2, 1, 1}, {1, 0, 2, 1}};
    const auto samples = torus_samples(4, 50);
    std::vector<SlopeConvention> invariant;
    for (SlopeConvention rule : {SlopeConvention::reflected, SlopeConvention::direct,
                                 SlopeConvention::inverse_transpose, SlopeConvention::transpose}) {
        double worst = 0.0;
        for (const SL2Z& m : elements) worst = std::max(worst, invariance_defect(e1, geometry::sl2z_action(m, rule), samples));
        if (worst <= 1e-9) invariant.push_back(rule);
    }
    ASSERT_EQ(invariant.size(), 1u);
    EXPECT_EQ(invariant[0], geometry::kSlopeConvention);
}

TEST(ActHorofunction, IdentityLeavesValues) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const Horofunction h = horofunction(e1, SlopeCurrent::single(1, 2), torus_landmarks());
    const Horofunction moved = act_horofunction(GroupElement::identity(), h);
    EXPECT_EQ(moved.values(), h.values());
    EXPECT_EQ(moved.source(), HorofunctionSource::group_translate);
}

TEST(ActHorofunction, MinskyTranslationShiftsTheWitness) {
    const Bifunctional minsky = geometry::minsky_half_plane();
    const auto set = std::make_shared<const LandmarkSet>(
        std::vector<Point>{Complex(0, 1), Complex(0, 2), Complex(1, 1), Complex(-2, 0.5)}, 0);
    const Horofunction moved = act_horofunction(geometry::minsky_action(1, 1, 0, 1), horofunction(minsky, RealParameter{0}, set));
    EXPECT_LE(horo_sup_distance(moved, horofunction(minsky, RealParameter{-1}, set)), 1e-14);
}

TEST(ActHorofunction, TranslateOfWitnessIsWitnessOfTranslate) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const auto set = torus_landmarks();
    const GroupElement g = geometry::sl2z_action(SL2Z{1, -1, 1, 0});
    const Point z = SlopeCurrent({{1, 3, 0.5}, {2, -1, 1.5}});
    EXPECT_LE(horo_sup_distance(act_horofunction(g, horofunction(e1, z, set)), horofunction(e1, g.act_n(z), set)),
              1e-12);
}

TEST(ActHorofunction, HoldsForMinskyElementsThatShiftI) {
    // A general Mobius map changes I(., t) by a t-dependent constant, which normalization removes.
    const Bifunctional minsky = geometry::minsky_half_plane();
    const auto set = std::make_shared<const LandmarkSet>(
        std::vector<Point>{Complex(0, 1), Complex(0, 2), Complex(1, 1), Complex(-2, 0.5)}, 0);
    const GroupElement g = geometry::minsky_action(2, 1, 1, 1);
    const Point z = RealParameter{0.4};
    EXPECT_LE(horo_sup_distance(act_horofunction(g, horofunction(minsky, z, set)), horofunction(minsky, g.act_n(z), set)),
              1e-12);
}

TEST(ActHorofunction, LandmarkOnlyHorofunctionRejected) {
    const Horofunction h(torus_landmarks(), {0, 1, 2, 3}, HorofunctionSource::boundary_limit);
    EXPECT_THROW(act_horofunction(GroupElement::identity(), h), UnsupportedOperationError);
}

TEST(Cocycle, IdentityHoldsOnTorus) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const Horofunction h = horofunction(e1, SlopeCurrent::single(2, 1, 0.8), torus_landmarks());
    const GroupElement g = geometry::sl2z_action(SL2Z{2, 1, 1, 1});
    for (int n = 1; n <= 6; ++n) EXPECT_LE(std::abs(cocycle_defect(g, h, n)), 1e-11) << "n = " << n;
}

TEST(Cocycle, IdentityHoldsOnMinsky) {
    const Bifunctional minsky = geometry::minsky_half_plane();
    const auto set = std::make_shared<const LandmarkSet>(std::vector<Point>{Complex(0.2, 1.3), Complex(0, 2)}, 0);
    const Horofunction h = horofunction(minsky, RealParameter{0.7}, set);
    const GroupElement g = geometry::minsky_action(2, 1, 1, 1);
    for (int n = 1; n <= 5; ++n) EXPECT_LE(std::abs(cocycle_defect(g, h, n)), 1e-10) << "n = " << n;
}

TEST(TranslationMetric, IdentityIsZero) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const DistanceMap d = [&](const Point& a, const Point& b) { return distance(e1, a, b, SearchConfig{}).lower_bound; };
    const TranslationEstimate t = translation_length_metric(d, GroupElement::identity(), Complex(0.3, 1.2), {1, 2, 4});
    EXPECT_EQ(t.extrapolated, 0.0);
    EXPECT_EQ(t.method, TranslationMethod::metric_subadditive);
}

TEST(TranslationMetric, TorusCatMapFromSquareTorus) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const DistanceMap d = [&](const Point& a, const Point& b) { return distance(e1, a, b, SearchConfig{}).lower_bound; };
    const TranslationEstimate t =
        translation_length_metric(d, geometry::sl2z_action(SL2Z{2, 1, 1, 1}), Complex(0, 1), iterate_range(12));
    EXPECT_NEAR(t.extrapolated, kGoldenLog, 1e-3);
    EXPECT_EQ(t.values.size(), 12u);
}

TEST(TranslationMetric, EuclideanTranslation) {
    const DistanceMap d = [](const Point& a, const Point& b) {
        const auto& x = std::get<RealVector>(a);
        const auto& y = std::get<RealVector>(b);
        return std::hypot(x[0] - y[0], x[1] - y[1]);
    };
    const TranslationEstimate t =
        translation_length_metric(d, geometry::euclidean_translation({3, 4}), RealVector{1, 1}, {1, 2, 3});
    EXPECT_NEAR(t.extrapolated, 5.0, 1e-12);
}

TEST(TranslationMetric, RejectsNonIncreasingIterates) {
    const DistanceMap d = [](const Point&, const Point&) { return 0.0; };
    EXPECT_THROW(translation_length_metric(d, GroupElement::identity(), Complex(0, 1), {2, 2}), Error);
    EXPECT_THROW(translation_length_metric(d, GroupElement::identity(), Complex(0, 1), {}), Error);
}

TEST(TranslationFunctional, IdentityIsZero) {
    const TranslationEstimate t = translation_length_functional(
        geometry::minsky_half_plane(), GroupElement::identity(), Complex(0.5, 2), RealParameter{1}, iterate_range(6));
    EXPECT_NEAR(t.extrapolated, 0.0, 1e-15);
    EXPECT_EQ(t.method, TranslationMethod::functional_limsup);
}

TEST(TranslationFunctional, TorusCatMap) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const TranslationEstimate t = translation_length_functional(e1, geometry::sl2z_action(SL2Z{2, 1, 1, 1}),
                                                                Complex(0, 1), SlopeCurrent::single(1, 0), iterate_range(12));
    EXPECT_NEAR(t.extrapolated, kGoldenLog, 1e-2);
}

TEST(TranslationFunctional, IndependentOfBasepoints) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const GroupElement g = geometry::sl2z_action(SL2Z{3, 2, 1, 1});
    const double a = translation_length_functional(e1, g, Complex(0, 1), SlopeCurrent::single(1, 0), iterate_range(12))
                         .extrapolated;
    const double b = translation_length_functional(e1, g, Complex(0.7, 2.5), SlopeCurrent::single(-1, 3, 2.0),
                                                   iterate_range(12))
                         .extrapolated;
    EXPECT_NEAR(a, b, 2e-2);
}

TEST(NorthSouth, TorusCatMap) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    std::vector<Point> probes;
    for (double theta : {0.2, 0.9, 1.4, 2.1, 2.9}) probes.emplace_back(SlopeCurrent::single(std::cos(theta), std::sin(theta)));
    const NSReport report =
        detect_north_south(e1, geometry::sl2z_action(SL2Z{2, 1, 1, 1}), probes, torus_landmarks(), 24, 1e-9);
    ASSERT_TRUE(report.declared);
    ASSERT_TRUE(report.tau);
    EXPECT_GT(report.separation, 0.1);
    EXPECT_NEAR(report.tau->h_plus_at_inverse_base, kGoldenLog, 2e-2);
    EXPECT_LE(report.tau->plus_gap, 2e-2);
    EXPECT_LE(report.tau->minus_gap, 2e-2);
    EXPECT_FALSE(report.negative_tau);
    EXPECT_EQ(report.landmarks->size(), torus_landmarks()->size() + 1);
}

TEST(NorthSouth, IdentityIsNotDeclared) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const NSReport report = detect_north_south(e1, GroupElement::identity(),
                                               {SlopeCurrent::single(1, 0), SlopeCurrent::single(1, 1)},
                                               torus_landmarks(), 8, 1e-9);
    EXPECT_FALSE(report.declared);
    EXPECT_FALSE(report.distinct);
}

TEST(NorthSouth, EllipticRotationCycles) {
    const double c = std::cos(std::numbers::pi / 4);
    const double s = std::sin(std::numbers::pi / 4);
    const auto set = std::make_shared<const LandmarkSet>(std::vector<Point>{Complex(0, 1), Complex(0, 2), Complex(1, 1)}, 0);
    const NSReport report = detect_north_south(geometry::minsky_half_plane(), geometry::minsky_action(c, -s, s, c),
                                               {RealParameter{0.3}, RealParameter{-1.7}}, set, 12, 1e-9);
    EXPECT_TRUE(report.periodic);
    EXPECT_FALSE(report.declared);
    ASSERT_TRUE(report.probes[0].forward_period);
    EXPECT_EQ(*report.probes[0].forward_period, 4u);
}

} // namespace
} // namespace horoforge
