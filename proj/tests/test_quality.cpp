#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "thinfem/quality.hpp"

using namespace thinfem;
using std::numbers::pi;

namespace {

/// Triangle with inner angles (a, b, pi - a - b) on a unit base.
Triangle with_angles(double a, double b) {
    const double c = pi - a - b;
    const double side = std::sin(b) / std::sin(c);  // law of sines, opposite b
    return Triangle{{Point2{{0, 0}}, Point2{{1, 0}}, Point2{{side * std::cos(a), side * std::sin(a)}}}};
}

Mesh2 permuted(const Mesh2& m, const std::vector<std::size_t>& order) {
    std::vector<Mesh2::Element> els;
    for (auto e : order) els.push_back(m.element(e));
    return Mesh2(m.points(), els, m.boundary_vertices());
}

}  // namespace

TEST(Classify, UniformRightAllGood) {
    const auto rep = classify(generate_uniform_right(4), pi / 6);
    EXPECT_EQ(rep.good, 32u);
    EXPECT_EQ(rep.bad + rep.ordinary, 0u);
}

TEST(Classify, SquareSixTwoBadPerCell) {
    const auto m = generate_square_six(2, 1e-4);
    const auto rep = classify(m, pi / 12);
    EXPECT_EQ(rep.bad, 8u);
    EXPECT_EQ(rep.classes.size(), 24u);
    // the bad ones are ABE and CDF, local indices 0 and 4
    for (auto e : rep.elements_of(ElementClass::Bad)) EXPECT_TRUE(e % 6 == 0 || e % 6 == 4) << e;
    // oracle: theta_max of ABE from its base/height
    EXPECT_NEAR(triangle_angles(m.simplex(0)).max, pi - 2 * std::atan(2e-4), 1e-13);
}

TEST(Classify, SquareSixKFourAtPointTwoSix) {
    const auto rep = classify(generate_square_six(4, 0.01), 0.26);
    EXPECT_EQ(rep.bad, 32u);
    EXPECT_EQ(rep.classes.size(), 96u);
}

TEST(Classify, TriangleByThresholds) {
    const auto t = with_angles(0.3, 1.2);
    const auto a = triangle_angles(t);
    ASSERT_NEAR(a.min, 0.3, 1e-14);
    ASSERT_NEAR(a.max, pi - 1.5, 1e-14);
    EXPECT_EQ(classify_element(t, 0.2), ElementClass::Good);
    EXPECT_EQ(classify_element(t, 0.35), ElementClass::Ordinary);
    // pi - 1.5 > pi - 2 theta once theta > 0.75, which is outside (0, pi/3]
    EXPECT_EQ(classify_element(with_angles(0.05, 0.05), 0.2), ElementClass::Bad);
}

TEST(Classify, TieAtThresholdIsNotBad) {
    AngleExtremes a{0.1, pi - 0.5};
    EXPECT_EQ(classify_angles<2>(a, 0.25), ElementClass::Ordinary);
    EXPECT_EQ(classify_angles<2>(a, 0.25 + 1e-12), ElementClass::Bad);
}

TEST(Classify, TetrahedraBadBelowTheta) {
    const Mesh3 m({Point3{{0, 0, 0}}, Point3{{1, 0, 0}}, Point3{{0, 1, 0}}, Point3{{0, 0, 1}}, Point3{{0.25, 0.25, 1e-3}}},
                  {{0, 1, 2, 3}, {0, 1, 2, 4}}, {});
    const auto rep = classify(m, 0.2);
    EXPECT_EQ(rep.classes[0], ElementClass::Good);
    EXPECT_EQ(rep.classes[1], ElementClass::Bad);
    EXPECT_EQ(rep.worst_min_element, 1u);
}

TEST(Classify, RejectsThetaOutOfRange) {
    const auto m = generate_uniform_right(1);
    EXPECT_THROW(classify(m, 0.0), InvalidParam);
    EXPECT_THROW(classify(m, pi / 3 + 1e-9), InvalidParam);
    EXPECT_NO_THROW(classify(m, pi / 3));
}

TEST(ClassifyProperties, BadSetMonotoneInTheta) {
    for (double alpha : {0.3, 0.1, 0.01, 1e-4}) {
        const auto m = generate_square_six(3, alpha);
        std::vector<bool> was_bad(m.element_count(), false);
        for (int i = 1; i <= 100; ++i) {
            const auto rep = classify(m, i * (pi / 3) / 100);
            for (std::size_t e = 0; e < m.element_count(); ++e) {
                const bool bad = rep.classes[e] == ElementClass::Bad;
                EXPECT_FALSE(was_bad[e] && !bad) << alpha << ' ' << e;
                was_bad[e] = bad;
            }
        }
    }
}

TEST(ClassifyProperties, RandomBadSetMonotoneAndGoodInsideK) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(1e-3, pi / 3);
    for (int n = 0; n < 100'000; ++n) {
        const auto t = oracle::random_triangle(rng, 1e-9);
        const auto a = triangle_angles(t);
        double th1 = U(rng), th2 = U(rng);
        if (th1 > th2) std::swap(th1, th2);
        const auto c1 = classify_angles<2>(a, th1), c2 = classify_angles<2>(a, th2);
        ASSERT_FALSE(c1 == ElementClass::Bad && c2 != ElementClass::Bad);
        if (c1 == ElementClass::Good) {
            ASSERT_LE(a.max, pi - 2 * th1 + 1e-12);
        }
    }
}

TEST(ClassifyProperties, ElementOrderPermutesReport) {
    const auto m = generate_square_six(3, 0.01);
    std::vector<std::size_t> order(m.element_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
    std::mt19937_64 rng(5);
    std::shuffle(order.begin(), order.end(), rng);
    const auto p = permuted(m, order);
    const auto a = classify(m, 0.3), b = classify(p, 0.3);
    for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(b.classes[i], a.classes[order[i]]);
    EXPECT_EQ(a.bad, b.bad);
    EXPECT_EQ(a.good, b.good);
    EXPECT_DOUBLE_EQ(a.worst_min_angle, b.worst_min_angle);
}

TEST(ClassifyProperties, CountsAddUp) {
    const auto rep = classify(generate_refined_diag(4, 0.05), 0.2);
    EXPECT_EQ(rep.good + rep.ordinary + rep.bad, rep.classes.size());
    EXPECT_EQ(rep.count(ElementClass::Bad), rep.elements_of(ElementClass::Bad).size());
    EXPECT_EQ(to_string(ElementClass::Ordinary), "ordinary");
}
