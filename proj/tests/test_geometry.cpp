#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "thinfem/geometry.hpp"

using namespace thinfem;
using std::numbers::pi;

namespace {

Triangle tri(double ax, double ay, double bx, double by, double cx, double cy) {
    return Triangle{{Point2{{ax, ay}}, Point2{{bx, by}}, Point2{{cx, cy}}}};
}

Triangle equilateral(double a) { return tri(0, 0, a, 0, a / 2, a * std::sqrt(3.0) / 2); }

Tetrahedron regular_tet() {
    const double s = 1.0 / std::sqrt(2.0);
    // edge length 1: alternate corners of a cube with side 1/sqrt(2)
    return Tetrahedron{{Point3{{0, 0, 0}}, Point3{{s, s, 0}}, Point3{{s, 0, s}}, Point3{{0, s, s}}}};
}

Tetrahedron corner_tet() {
    return Tetrahedron{{Point3{{0, 0, 0}}, Point3{{1, 0, 0}}, Point3{{0, 1, 0}}, Point3{{0, 0, 1}}}};
}

}  // namespace

TEST(TriangleAngles, RightIsosceles) {
    const auto a = triangle_angles(tri(0, 0, 1, 0, 0, 1));
    EXPECT_NEAR(a.min, pi / 4, 1e-15);
    EXPECT_NEAR(a.max, pi / 2, 1e-15);
}

TEST(TriangleAngles, Equilateral) {
    const auto a = triangle_angles(equilateral(1));
    EXPECT_NEAR(a.min, pi / 3, 1e-15);
    EXPECT_NEAR(a.max, pi / 3, 1e-15);
}

TEST(TriangleAngles, FlatIsoscelesMatchesCosineLaw) {
    const auto t = tri(0, 0, 1, 0, 0.5, 0.05);
    const auto a = triangle_angles(t);
    EXPECT_NEAR(a.min, std::atan(0.1), 1e-15);
    EXPECT_NEAR(a.max, pi - 2 * std::atan(0.1), 1e-14);
    EXPECT_NEAR(a.max, oracle::cosine_law_angle(t, 2), 1e-13);
}

TEST(TriangleAngles, RejectsDegenerate) {
    EXPECT_THROW(triangle_angles(tri(0, 0, 1, 0, 2, 0)), DegenerateSimplex);
    EXPECT_THROW(triangle_angles(tri(0, 0, 0, 0, 1, 1)), DegenerateSimplex);
}

TEST(TriangleAngles, VeryThinStaysAccurate) {
    const double t = 1e-9;
    const auto a = triangle_angles(tri(0, 0, 1, 0, 0.5, t));
    EXPECT_NEAR(a.min, std::atan(2 * t), 1e-22);
    EXPECT_NEAR(pi - a.max, 2 * std::atan(2 * t), 1e-15);
}

TEST(Diameter, Examples) {
    EXPECT_NEAR(diameter(tri(0, 0, 1, 0, 0, 1)), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(diameter(equilateral(2.5)), 2.5, 1e-15);
    // base k, apex height alpha k: the base is the longest edge
    const double k = 0.1, alpha = 0.1;
    EXPECT_DOUBLE_EQ(diameter(tri(0, 0, k, 0, k / 2, alpha * k)), k);
}

TEST(InradiusDiameter, Examples) {
    EXPECT_NEAR(inradius_diameter(tri(0, 0, 1, 0, 0, 1)), 2 - std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(inradius_diameter(equilateral(1)), 1 / std::sqrt(3.0), 1e-15);
    const auto flat = tri(0, 0, 1, 0, 0.5, 0.05);
    // area 0.025, perimeter 1 + 2 sqrt(0.25 + 0.0025)
    const double expected = 4 * 0.025 / (1 + 2 * std::sqrt(0.2525));
    EXPECT_NEAR(inradius_diameter(flat), expected, 1e-15);
    EXPECT_NEAR(inradius_diameter(flat), oracle::incircle_diameter(flat), 1e-15);
}

TEST(ShapeRatio, Examples) {
    EXPECT_NEAR(shape_ratio(equilateral(3)), std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(shape_ratio(tri(0, 0, 1, 0, 0, 1)), 1 + std::sqrt(2.0), 1e-14);
    const double r1 = shape_ratio(tri(0, 0, 1, 0, 0.5, 0.1));
    const double r2 = shape_ratio(tri(0, 0, 1, 0, 0.5, 0.01));
    EXPECT_GT(r2, r1);
    EXPECT_NEAR(r2 / r1, 10.0, 1.0);  // grows like 1/t
}

TEST(Measure, Examples) {
    EXPECT_DOUBLE_EQ(measure(tri(0, 0, 1, 0, 0, 1)), 0.5);
    EXPECT_DOUBLE_EQ(measure(corner_tet()), 1.0 / 6.0);
    const double k = 0.1, alpha = 1e-4;
    EXPECT_NEAR(measure(tri(0, 0, k, 0, k / 2, alpha * k)), k * k * alpha / 2, 1e-22);
    EXPECT_LT(signed_measure(tri(0, 0, 0, 1, 1, 0)), 0.0);
}

TEST(Tetrahedron, RegularClosedForms) {
    const auto s = tetrahedron_angle_set(regular_tet());
    for (double f : s.face) EXPECT_NEAR(f, pi / 3, 1e-12);
    for (double d : s.dihedral) EXPECT_NEAR(d, std::acos(1.0 / 3.0), 1e-12);
    for (double o : s.solid) EXPECT_NEAR(o, std::acos(23.0 / 27.0), 1e-12);
    const auto a = tetrahedron_angles(regular_tet());
    EXPECT_NEAR(a.min, std::acos(23.0 / 27.0), 1e-12);
    EXPECT_NEAR(a.max, std::acos(1.0 / 3.0), 1e-12);
    EXPECT_NEAR(measure(regular_tet()), 1 / (6 * std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(diameter(regular_tet()), 1.0, 1e-15);
}

TEST(Tetrahedron, CornerHasRightDihedralsAlongAxes) {
    const auto s = tetrahedron_angle_set(corner_tet());
    // edges (0,1), (0,2), (0,3) are the coordinate axes
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.dihedral[k], pi / 2, 1e-15);
    EXPECT_NEAR(s.solid[0], pi / 2, 1e-15);  // an octant
}

TEST(Tetrahedron, FlattenedHasSmallMinAngle) {
    const Tetrahedron t{{Point3{{0, 0, 0}}, Point3{{1, 0, 0}}, Point3{{0, 1, 0}}, Point3{{0.25, 0.25, 1e-3}}}};
    const auto a = tetrahedron_angles(t);
    EXPECT_LT(a.min, 0.01);
    // brute force: the smallest dihedral along the base edges
    const auto s = tetrahedron_angle_set(t);
    double smallest = pi;
    for (double d : s.dihedral) smallest = std::min(smallest, d);
    EXPECT_LT(smallest, 0.01);
}

TEST(Tetrahedron, RejectsDegenerate) {
    const Tetrahedron flat{{Point3{{0, 0, 0}}, Point3{{1, 0, 0}}, Point3{{0, 1, 0}}, Point3{{1, 1, 0}}}};
    EXPECT_THROW(tetrahedron_angles(flat), DegenerateSimplex);
}

TEST(TetrahedronProperties, SolidAnglesSumBelowHalfSphereAndInvariant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int n = 0; n < 2000; ++n) {
        Tetrahedron t;
        for (auto& v : t.vertices) v = Point3{{U(rng), U(rng), U(rng)}};
        if (measure(t) < 1e-3) continue;
        const auto s = tetrahedron_angle_set(t);
        double sum = 0;
        for (double o : s.solid) sum += o;
        EXPECT_LT(sum, 2 * pi);
        // permuting vertices leaves the extremes unchanged
        Tetrahedron p{{t[2], t[0], t[3], t[1]}};
        const auto a = tetrahedron_angles(t), b = tetrahedron_angles(p);
        EXPECT_NEAR(a.min, b.min, 1e-12);
        EXPECT_NEAR(a.max, b.max, 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Random-triangle properties

TEST(TriangleProperties, AngleSumOverOneMillionTriangles) {
    std::mt19937_64 rng(1);
    double worst = 0;
    for (int n = 0; n < 1'000'000; ++n) {
        const auto t = oracle::random_triangle(rng, 1e-12);
        const auto a = triangle_inner_angles(t);
        worst = std::max(worst, std::abs(a[0] + a[1] + a[2] - pi));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(TriangleProperties, MatchCosineLawHeronAndIncircleOracles) {
    std::mt19937_64 rng(2);
    int checked = 0;
    for (int n = 0; n < 100'000; ++n) {
        const auto t = oracle::random_triangle(rng, 1e-3);
        const auto a = triangle_inner_angles(t);
        // acos loses digits near 0 and pi; stay where the oracle is sharp
        if (*std::min_element(a.begin(), a.end()) < 0.01 || *std::max_element(a.begin(), a.end()) > pi - 0.01) continue;
        ++checked;
        for (int i = 0; i < 3; ++i) ASSERT_NEAR(a[i], oracle::cosine_law_angle(t, i), 1e-12);
        ASSERT_NEAR(measure(t), oracle::heron_area(t), 1e-12);
        ASSERT_NEAR(inradius_diameter(t), oracle::incircle_diameter(t), 1e-12);
        ASSERT_NEAR(diameter(t), std::max({oracle::side(t, 0), oracle::side(t, 1), oracle::side(t, 2)}), 1e-15);
    }
    EXPECT_GT(checked, 80'000);
}

TEST(TriangleProperties, SimilarityInvariance) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int n = 0; n < 100'000; ++n) {
        const auto t = oracle::random_triangle(rng, 1e-3);
        const oracle::Similarity S{pi * U(rng), std::exp(2 * U(rng)), Point2{{5 * U(rng), 5 * U(rng)}}};
        const auto u = S(t);
        const Triangle perm{{t[1], t[2], t[0]}};
        const Triangle flip{{t[0], t[2], t[1]}};
        const auto a = triangle_angles(t);
        for (const auto& other : {u, perm, flip}) {
            const auto b = triangle_angles(other);
            ASSERT_NEAR(a.min, b.min, 1e-12);
            ASSERT_NEAR(a.max, b.max, 1e-12);
        }
        ASSERT_NEAR(shape_ratio(t), shape_ratio(u), 1e-9 * shape_ratio(t));
    }
}

TEST(TriangleProperties, ShapeRatioLowerBoundAndMinAngleEnvelope) {
    std::mt19937_64 rng(4);
    for (int n = 0; n < 100'000; ++n) {
        const auto t = oracle::random_triangle(rng, 1e-6);
        const double r = shape_ratio(t);
        ASSERT_GE(r, std::sqrt(3.0) - 1e-12);
        const double amin = triangle_angles(t).min;
        ASSERT_LE(r, 2 / std::sin(amin) * (1 + 1e-12));
    }
}

TEST(TriangleProperties, ThinFamiliesApproachLimits) {
    // apex height t above the midpoint of a unit base
    for (double t : {1e-1, 1e-3, 1e-6, 1e-10}) {
        const auto tr = tri(0, 0, 1, 0, 0.5, t);
        EXPECT_NEAR(triangle_angles(tr).max, pi - 2 * std::atan(2 * t), 1e-14);
        EXPECT_NEAR(measure(tr), t / 2, 1e-17);
    }
}
