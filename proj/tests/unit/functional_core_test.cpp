#include "horoforge/core/functional_core.hpp"
#include "horoforge/geometries/euclidean.hpp"
#include "horoforge/geometries/minsky.hpp"
#include "horoforge/geometries/torus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace horoforge {
namespace {

double norm_distance(const Point& a, const Point& b) {
    const auto& x = std::get<RealVector>(a);
    const auto& y = std::get<RealVector>(b);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

double hyperbolic(const Point& a, const Point& b) {
    const Complex z = std::get<Complex>(a);
    const Complex w = std::get<Complex>(b);
    return std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

TEST(Evaluate, EuclideanInnerProductWithUnitWitness) {
    EXPECT_DOUBLE_EQ(evaluate(geometry::euclidean_inner(2), RealVector{3, 4}, RealVector{0, 1}), 4.0);
}

TEST(Evaluate, MinskyAtOrigin) {
    EXPECT_EQ(evaluate(geometry::minsky_half_plane(), Complex(0, 1), RealParameter{0.0}), 0.0);
}

TEST(Evaluate, TorusExtremalAtSquareTorus) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    EXPECT_NEAR(evaluate(e1, Complex(0, 1), SlopeCurrent::single(1, 0)), 0.0, 1e-15);
}

TEST(Evaluate, IsBitwiseDeterministic) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const Point x = Complex(0.3, 1.7);
    const Point z = SlopeCurrent::single(2, -1, 0.5);
    const double first = evaluate(e1, x, z);
    for (int k = 0; k < 10; ++k) EXPECT_EQ(evaluate(e1, x, z), first);
}

TEST(Evaluate, RejectsWrongEncoding) {
    const Bifunctional minsky = geometry::minsky_half_plane();
    EXPECT_THROW(evaluate(minsky, RealVector{1, 2}, RealParameter{0}), DomainMismatchError);
    EXPECT_THROW(evaluate(minsky, Complex(0, 1), Complex(0, 1)), DomainMismatchError);
}

TEST(Evaluate, RejectsInvalidValues) {
    EXPECT_THROW(evaluate(geometry::minsky_half_plane(), Complex(0, -1), RealParameter{0}), InvalidPointError);
    EXPECT_THROW(evaluate(geometry::euclidean_inner(2), RealVector{1, 1}, RealVector{0, 0}), InvalidPointError);
    EXPECT_THROW(evaluate(geometry::euclidean_inner(2), RealVector{1, 1, 1}, RealVector{1, 0}), DomainMismatchError);
}

TEST(SlopeCurrentType, RejectsBadAtoms) {
    EXPECT_THROW(SlopeCurrent::single(0, 0), InvalidPointError);
    EXPECT_THROW(SlopeCurrent::single(1, 0, 0.0), InvalidPointError);
    EXPECT_THROW(SlopeCurrent::single(1, 0, -1.0), InvalidPointError);
}

TEST(SlopeCurrentType, MergesParallelAtoms) {
    const SlopeCurrent merged({{1, 2, 1.0}, {-2, -4, 0.5}});
    ASSERT_EQ(merged.size(), 1u);
    EXPECT_DOUBLE_EQ(merged.atoms()[0].w, 2.0);
}

TEST(CheckSeparation, EuclideanCoordinateDirections) {
    const WitnessSet w{{RealVector{1, 0}, RealVector{-1, 0}, RealVector{0, 1}, RealVector{0, -1}}};
    const SeparationReport report =
        check_separation(geometry::euclidean_inner(2), {RealVector{0, 0}, RealVector{1, 0}}, w, 1e-9);
    ASSERT_EQ(report.pairs.size(), 2u);
    EXPECT_TRUE(report.all_pass);
    EXPECT_TRUE(report.restricted_certificate);
}

TEST(CheckSeparation, OneSidedWitnessesSeparateOneOrderOnly) {
    const WitnessSet w{{RealVector{1, 0}, RealVector{0, 1}}};
    const SeparationReport report =
        check_separation(geometry::euclidean_inner(2), {RealVector{0, 0}, RealVector{1, 0}}, w, 1e-9);
    EXPECT_FALSE(report.pairs[0].positive_witness);
    EXPECT_TRUE(report.pairs[1].positive_witness);
    EXPECT_TRUE(report.pairs[0].non_constant);
    EXPECT_FALSE(report.all_pass);
}

TEST(CheckSeparation, DuplicatePointFailsCondition1) {
    const WitnessSet w{{RealParameter{0}, RealParameter{1}}};
    const SeparationReport report =
        check_separation(geometry::minsky_half_plane(), {Complex(0, 1), Complex(0, 1)}, w, 1e-12);
    for (const SeparationPair& pair : report.pairs) EXPECT_FALSE(pair.positive_witness);
    EXPECT_FALSE(report.all_pass);
}

TEST(CheckSeparation, TorusSquareAgainstTall) {
    const Bifunctional e1 = geometry::make_torus_bifunctional(geometry::TorusKind::e1);
    const WitnessSet w{{SlopeCurrent::single(1, 0), SlopeCurrent::single(0, 1)}};
    const SeparationReport report = check_separation(e1, {Complex(0, 1), Complex(0, 2)}, w, 1e-9);
    EXPECT_TRUE(report.all_pass);
    // Ordered pair (i, 2i): witness (1,0) gives (1/2) log Ext_i - (1/2) log Ext_2i = (1/2) log 2.
    const SeparationPair& first = report.pairs[0];
    EXPECT_EQ(first.x_index, 0u);
    EXPECT_EQ(first.best_witness, 0u);
    EXPECT_NEAR(first.best_difference, 0.5 * std::log(2.0), 1e-15);
}

TEST(CheckSeparation, NeedsTwoPoints) {
    EXPECT_THROW(check_separation(geometry::minsky_half_plane(), {Complex(0, 1)}, WitnessSet{{RealParameter{0}}}, 1e-9),
                 Error);
}

TEST(QuotientPoints, EuclideanTwoClasses) {
    const WitnessSet w{{RealVector{1, 0}, RealVector{0, 1}}};
    const auto classes = quotient_points(geometry::euclidean_inner(2), {RealVector{0, 0}, RealVector{1, 0}}, w, 1e-9);
    EXPECT_EQ(classes.size(), 2u);
}

TEST(QuotientPoints, ConstantInFirstArgumentGivesOneClass) {
    Bifunctional constant = geometry::euclidean_inner(2);
    constant.eval = [](const Point&, const Point& z) { return std::get<RealVector>(z)[0]; };
    const WitnessSet w{{RealVector{1, 0}, RealVector{0.3, 0.4}}};
    const auto classes = quotient_points(constant, {RealVector{0, 0}, RealVector{1, 0}, RealVector{5, -2}}, w, 1e-12);
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_EQ(classes[0].size(), 3u);
}

TEST(QuotientPoints, DuplicateEncodingOneClass) {
    const WitnessSet w{{RealParameter{0}, RealParameter{2}}};
    const auto classes = quotient_points(geometry::minsky_half_plane(), {Complex(0, 1), Complex(0.0 + 0.0, 1)}, w, 1e-12);
    EXPECT_EQ(classes.size(), 1u);
}

TEST(QuotientPoints, IsAPartitionOnRandomSamples) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Point> sample;
    for (int k = 0; k < 12; ++k) sample.emplace_back(RealVector{u(rng), u(rng)});
    sample.push_back(sample[3]);
    const WitnessSet w{{RealVector{1, 0}, RealVector{0, 1}, RealVector{1, 1}}};
    const auto classes = quotient_points(geometry::euclidean_inner(2), sample, w, 1e-9);
    std::vector<int> seen(sample.size(), 0);
    for (const auto& c : classes) {
        for (std::size_t i : c) ++seen[i];
    }
    for (int count : seen) EXPECT_EQ(count, 1);
    EXPECT_EQ(classes.size(), sample.size() - 1);
}

TEST(LipschitzDefect, EuclideanRandomPairs) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<std::pair<Point, Point>> pairs;
    for (int k = 0; k < 100; ++k) pairs.emplace_back(RealVector{u(rng), u(rng)}, RealVector{u(rng), u(rng)});
    WitnessSet w;
    for (int k = 0; k < 32; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 32;
        w.points.emplace_back(RealVector{std::cos(a), std::sin(a)});
    }
    EXPECT_LE(lipschitz_defect(geometry::euclidean_inner(2), norm_distance, pairs, w), 1e-9);
}

TEST(LipschitzDefect, SamePointPair) {
    const WitnessSet w{{RealVector{1, 0}}};
    const double defect = lipschitz_defect(geometry::euclidean_inner(2), norm_distance,
                                           {{RealVector{1, 2}, RealVector{1, 2}}}, w);
    EXPECT_EQ(defect, 0.0);
}

TEST(LipschitzDefect, MinskyWithHyperbolicOracle) {
    const WitnessSet w{{RealParameter{0}, RealParameter{1}, RealParameter{-3}, RealParameter{100}}};
    EXPECT_LE(lipschitz_defect(geometry::minsky_half_plane(), hyperbolic, {{Complex(0, 1), Complex(0, 2)}}, w), 1e-9);
}

} // namespace
} // namespace horoforge
