#include "horoforge/geometries/euclidean.hpp"
#include "horoforge/geometries/funk.hpp"
#include "horoforge/geometries/minsky.hpp"
#include "horoforge/metric/metric_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace horoforge::geometry {
namespace {

ConvexPolytope square() { return ConvexPolytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

TEST(Euclidean, UnitWitness) { EXPECT_DOUBLE_EQ(evaluate(euclidean_inner(2), RealVector{1, 0}, RealVector{1, 0}), 1.0); }

TEST(Euclidean, WitnessScaleIsIrrelevant) {
    const Bifunctional inner = euclidean_inner(3);
    const RealVector x{0.3, -1.2, 2.0};
    EXPECT_DOUBLE_EQ(evaluate(inner, x, RealVector{1, 2, 2}), evaluate(inner, x, RealVector{2, 4, 4}));
}

TEST(Euclidean, OracleIsTheNorm) {
    EXPECT_DOUBLE_EQ(euclidean_inner(2).oracle_d_m(RealVector{0, 0}, RealVector{3, 4}), 5.0);
}

TEST(Euclidean, ZeroWitnessRejected) {
    EXPECT_THROW(evaluate(euclidean_inner(2), RealVector{1, 0}, RealVector{0, 0}), InvalidPointError);
}

TEST(Euclidean, NonOrthogonalRotationRejected) {
    EXPECT_THROW(euclidean_rotation(2, {1, 1, 0, 1}), InvalidPointError);
    EXPECT_THROW(euclidean_rotation(2, {1, 0, 0}), InvalidPointError);
}

TEST(Euclidean, RotationInverse) {
    const GroupElement g = euclidean_rotation(2, {0, -1, 1, 0});
    const Point x = RealVector{2, 5};
    EXPECT_EQ(std::get<RealVector>(g.inverse().act_m(g.act_m(x))), (RealVector{2, 5}));
    EXPECT_EQ(std::get<RealVector>(g.act_m(x)), (RealVector{-5, 2}));
}

TEST(Euclidean, ActionBuilderUsesGroupData) {
    const Bifunctional inner = euclidean_inner(2);
    ASSERT_TRUE(inner.action_builder);
    const GroupElement g = inner.action_builder({0, -1, 1, 0});
    EXPECT_EQ(std::get<RealVector>(g.act_n(RealVector{1, 0})), (RealVector{0, 1}));
}

TEST(Minsky, ValueAtOrigin) { EXPECT_EQ(evaluate(minsky_half_plane(), Complex(0, 1), RealParameter{0}), 0.0); }

TEST(Minsky, FormulaAtAGenericPoint) {
    // log(y + (t + x)^2 / y) with x = 0.5, y = 2, t = 1.5: log(2 + 4/2) = log 4.
    EXPECT_NEAR(evaluate(minsky_half_plane(), Complex(0.5, 2), RealParameter{1.5}), std::log(4.0), 1e-15);
}

TEST(Minsky, OracleValues) {
    const Bifunctional minsky = minsky_half_plane();
    EXPECT_NEAR(minsky.oracle_d_m(Complex(0, 1), Complex(0, 2)), std::log(2.0), 1e-15);
    EXPECT_NEAR(minsky.oracle_d_m(Complex(0, 1), Complex(1, 1)), std::acosh(1.5), 1e-15);
}

TEST(Minsky, LowerHalfPlaneRejected) {
    EXPECT_THROW(evaluate(minsky_half_plane(), Complex(0, 0), RealParameter{0}), InvalidPointError);
}

TEST(Minsky, ActionNeedsUnitDeterminant) {
    EXPECT_THROW(minsky_action(2, 0, 0, 1), InvalidPointError);
    EXPECT_THROW(minsky_half_plane().action_builder({1, 0, 0}), InvalidPointError);
}

TEST(Minsky, TranslationPreservesI) {
    const GroupElement g = minsky_action(1, 2.5, 0, 1);
    const Bifunctional minsky = minsky_half_plane();
    const Point z = Complex(-0.3, 0.8);
    const Point t = RealParameter{1.1};
    EXPECT_NEAR(evaluate(minsky, g.act_m(z), g.act_n(t)), evaluate(minsky, z, t), 1e-14);
}

TEST(Funk, SquareFacets) {
    const ConvexPolytope p = square();
    ASSERT_EQ(p.facets().size(), 4u);
    for (const Facet& f : p.facets()) EXPECT_NEAR(f.offset, 1.0, 1e-12);
    EXPECT_NEAR(p.interior_margin({0.5, 0}), 0.5, 1e-12);
    EXPECT_LT(p.interior_margin({2, 0}), 0.0);
}

TEST(Funk, NonExtremeVerticesIgnored) {
    const ConvexPolytope p({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, 0}, {0, 1}});
    EXPECT_EQ(p.facets().size(), 4u);
}

TEST(Funk, SquareExamples) {
    const ConvexPolytope p = square();
    const Bifunctional funk = funk_polytope(p);
    const WitnessSet all{{FacetIndex{0}, FacetIndex{1}, FacetIndex{2}, FacetIndex{3}}};
    EXPECT_NEAR(distance_on_witnesses(funk, RealVector{0, 0}, RealVector{0.5, 0}, all).lower_bound, std::log(2.0), 1e-15);
    EXPECT_NEAR(distance_on_witnesses(funk, RealVector{0.5, 0}, RealVector{0, 0}, all).lower_bound, std::log(1.5), 1e-15);
    EXPECT_EQ(distance_on_witnesses(funk, RealVector{0.2, 0.1}, RealVector{0.2, 0.1}, all).lower_bound, 0.0);
    EXPECT_NEAR(funk_closed_form(p, {0, 0}, {0.5, 0}), std::log(2.0), 1e-15);
    EXPECT_NEAR(funk_closed_form(p, {0.5, 0}, {0, 0}), std::log(1.5), 1e-15);
    EXPECT_EQ(funk_closed_form(p, {0.3, 0.3}, {0.3, 0.3}), 0.0);
}

TEST(Funk, TetrahedronMatchesClosedForm) {
    const ConvexPolytope p({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    ASSERT_EQ(p.facets().size(), 4u);
    const Bifunctional funk = funk_polytope(p);
    const WitnessSet w = funk.witness_grid(RealVector{0.1, 0.1, 0.1}, RealVector{0.2, 0.3, 0.1}, SearchConfig{});
    const RealVector x{0.1, 0.1, 0.1};
    const RealVector y{0.2, 0.3, 0.1};
    EXPECT_NEAR(distance_on_witnesses(funk, x, y, w).lower_bound, funk_closed_form(p, x, y), 1e-12);
}

TEST(Funk, ExteriorPointRejected) {
    const Bifunctional funk = funk_polytope(square());
    EXPECT_THROW(evaluate(funk, RealVector{1.5, 0}, FacetIndex{0}), InvalidPointError);
    EXPECT_THROW(evaluate(funk, RealVector{0, 0}, FacetIndex{9}), InvalidPointError);
}

TEST(Funk, DegeneratePolytopesRejected) {
    EXPECT_THROW(ConvexPolytope({{0, 0}, {1, 1}, {2, 2}}), InvalidPointError);
    EXPECT_THROW(ConvexPolytope({}), InvalidPointError);
    EXPECT_THROW(ConvexPolytope({{0, 0}, {1, 0, 0}, {0, 1}}), InvalidPointError);
}

TEST(Funk, LoadsVertexLists) {
    std::istringstream in("# unit square\n0 0\n1 0\n\n1 1   # corner\n0 1\n");
    EXPECT_EQ(load_polytope(in).facets().size(), 4u);
}

TEST(Funk, LoadErrorsNameTheLine) {
    std::istringstream bad_number("0 0\n1 x\n1 1\n");
    try {
        load_polytope(bad_number);
        FAIL() << "expected a parse error";
    } catch (const InvalidPointError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    std::istringstream ragged("0 0\n1 0\n1 1 1\n");
    try {
        load_polytope(ragged);
        FAIL() << "expected a dimension error";
    } catch (const InvalidPointError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_polytope_file("/nonexistent/polytope.txt"), Error);
}

TEST(Funk, LoadsFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "horoforge_triangle.txt";
    {
        std::ofstream out(path);
        out << "0 0\n2 0\n0 2\n";
    }
    EXPECT_EQ(load_polytope_file(path.string()).facets().size(), 3u);
    std::filesystem::remove(path);
}

} // namespace
} // namespace horoforge::geometry
