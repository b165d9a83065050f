#pragma once

// Cover plans and meshes shared by the covering, interpolation and
// acceptance checks.

#include <numbers>
#include <vector>

#include "thinfem/thinfem.hpp"

namespace fixture {

using namespace thinfem;

/// Parent triangles of the uniform mesh cover their thin children.
inline CoverPlan parent_plan(int K) {
    const auto coarse = generate_uniform_right(K);
    CoverPlan plan;
    for (std::size_t p = 0; p < coarse.element_count(); ++p) {
        plan.covers.push_back({coarse.simplex(p), {static_cast<Index>(refined_diag_thin_child(p))}});
    }
    plan.params = {std::numbers::pi / 6, std::numbers::pi / 4, 1.0, 1, 1};
    return plan;
}

/// L-shaped domain [0,2]^2 minus (1,2]x(1,2] with the reflex corner at (1,1).
inline PolygonDomain l_domain() {
    return PolygonDomain({{{0, 0}}, {{2, 0}}, {{2, 1}}, {{1, 1}}, {{1, 2}}, {{0, 2}}});
}

/// Right-triangle mesh of the L-shape on a grid of spacing 1/2.
inline Mesh2 l_mesh() {
    std::vector<Point2> pts;
    std::vector<Mesh2::Element> els;
    auto id = [](int i, int j) { return static_cast<Index>(j * 5 + i); };
    for (int j = 0; j <= 4; ++j) {
        for (int i = 0; i <= 4; ++i) pts.push_back(Point2{{0.5 * i, 0.5 * j}});
    }
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            if (i >= 2 && j >= 2) continue;
            els.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            els.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    const auto dom = l_domain();
    std::vector<Index> boundary;
    for (Index v = 0; v < pts.size(); ++v) {
        if (dom.on_boundary(pts[v], 1e-12)) boundary.push_back(v);
    }
    return Mesh2(pts, els, boundary);
}

/// Element with vertices (0.5,0.5), (1,0.5), (1,1) of l_mesh().
inline Index l_mesh_corner_element(const Mesh2& m) {
    Index e = 0;
    for (; e < m.element_count(); ++e) {
        const auto t = m.simplex(e);
        if (t[0] == (Point2{{0.5, 0.5}}) && t[2] == (Point2{{1, 1}})) break;
    }
    return e;
}

/// A cover whose edge passes through the reflex corner of the L-shape while
/// all its vertices are interior: violates only the boundary condition.
inline CoverPlan l_corner_plan(const Mesh2& m) {
    CoverPlan plan;
    plan.covers.push_back(
        {Triangle{{Point2{{0.2, 0.2}}, Point2{{1.8, 0.2}}, Point2{{0.2, 1.8}}}}, {l_mesh_corner_element(m)}});
    plan.params = {std::numbers::pi / 6, std::numbers::pi / 4, 3.3, 1, 1};
    return plan;
}

/// Isosceles plan on square_six(3, 0.01) with the centre cell's ABE cover
/// widened past A and B, so A and B are no longer vertices of its hull.
inline CoverPlan widened_centre_plan(const Mesh2& m) {
    const int K = 3;
    auto plan = derive_cover_isosceles(m, 0.6);
    const Index centre_abe = 6 * (1 * K + 1);
    for (auto& c : plan.covers) {
        if (c.cluster[0] != centre_abe) continue;
        const double k = 1.0 / K, d = 0.01;
        c.simplex = isosceles_on_edge(Point2{{k - d, k}}, Point2{{2 * k + d, k}}, Point2{{0.5, 0.9}}, 0.6);
    }
    plan.params.M = 2;
    return plan;
}

}  // namespace fixture
