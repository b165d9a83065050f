#pragma once

// Lagrange interpolation, the cover-based modified interpolation Pi*, and
// H1 / H2 seminorms evaluated by elementwise quadrature.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "thinfem/covering.hpp"
#include "thinfem/error.hpp"
#include "thinfem/field.hpp"
#include "thinfem/mesh.hpp"
#include "thinfem/planar.hpp"
#include "thinfem/quadrature.hpp"

namespace thinfem {

/// A continuous piecewise linear function: one value per mesh vertex.
struct NodalFunction {
    std::vector<double> values;

    double operator[](Index v) const { return values[v]; }
    std::size_t size() const { return values.size(); }
};

inline void require_matching(const Mesh2& m, const NodalFunction& f) {
    if (f.size() != m.vertex_count()) {
        throw InvalidParam("nodal function has " + std::to_string(f.size()) + " values for " +
                           std::to_string(m.vertex_count()) + " vertices");
    }
}

/// Pi^1 u: u sampled at the vertices.
inline NodalFunction lagrange_nodal(const ScalarField& u, const Mesh2& m) {
    NodalFunction f;
    f.values.reserve(m.vertex_count());
    for (const auto& p : m.points()) f.values.push_back(u(p));
    return f;
}

/// Value at p of the linear interpolant of u on triangle t.
inline double lagrange_on_simplex(const ScalarField& u, const Triangle& t, const Point2& p,
                                  double outside_tol = 1e-10) {
    const auto l = barycentric(t, p);
    for (double li : l) {
        if (li < -outside_tol) {
            throw InvalidCoverGeometry("point lies outside the covering triangle (barycentric " + std::to_string(li) + ")");
        }
    }
    return l[0] * u(t[0]) + l[1] * u(t[1]) + l[2] * u(t[2]);
}

struct PiStarOptions {
    /// Skip verify_assumption_general before interpolating.
    bool force = false;
    PolygonDomain domain = PolygonDomain::unit_square();
};

/// Pi* u: vertices of cluster elements take the linear interpolant of u over
/// their cover T_k, all other vertices take u itself. A vertex reached by two
/// covers that disagree beyond 1e-12 (1 + max|u|) raises ConflictingCoverValues.
inline NodalFunction pi_star_nodal(const ScalarField& u, const Mesh2& m, const CoverPlan& plan,
                                   const PiStarOptions& opt = {}) {
    if (!opt.force) {
        const auto rep = verify_assumption_general(m, plan, opt.domain);
        if (!rep.satisfied) throw AssumptionViolated("cover plan does not satisfy the covering assumption");
    } else {
        validate_plan(m, plan);
    }
    auto w = lagrange_nodal(u, m);
    double scale = 0.0;
    for (double v : w.values) scale = std::max(scale, std::abs(v));
    const double conflict_tol = 1e-12 * (1.0 + scale);

    std::vector<bool> assigned(m.vertex_count(), false);
    for (std::size_t k = 0; k < plan.covers.size(); ++k) {
        const auto& cover = plan.covers[k];
        for (auto e : cover.cluster) {
            for (auto v : m.element(e)) {
                const double val = lagrange_on_simplex(u, cover.simplex, m.point(v));
                if (assigned[v]) {
                    if (std::abs(val - w.values[v]) > conflict_tol) {
                        throw ConflictingCoverValues("vertex " + std::to_string(v) + " receives different values from two covers");
                    }
                    continue;
                }
                assigned[v] = true;
                w.values[v] = val;
            }
        }
    }
    return w;
}

/// Constant gradient of the linear function with nodal values (v0, v1, v2) on t.
inline Point2 linear_gradient(const Triangle& t, double v0, double v1, double v2) {
    const Point2 e1 = t[1] - t[0];
    const Point2 e2 = t[2] - t[0];
    const double det = cross(e1, e2);
    if (!(std::abs(det) >= 2.0 * kDegeneracyFloor)) throw DegenerateSimplex("gradient on a degenerate element");
    const double d1 = v1 - v0, d2 = v2 - v0;
    return {{(e2[1] * d1 - e1[1] * d2) / det, (e1[0] * d2 - e2[0] * d1) / det}};
}

inline Point2 element_gradient(const Mesh2& m, const NodalFunction& f, std::size_t e) {
    const auto& el = m.element(e);
    return linear_gradient(m.simplex(e), f[el[0]], f[el[1]], f[el[2]]);
}

/// Squared H1 seminorm of u - v on element e.
inline double h1_seminorm_diff_sq_on(const Mesh2& m, std::size_t e, const ScalarField& u, const NodalFunction& v,
                                     const QuadratureRule& q) {
    const auto t = m.simplex(e);
    const Point2 g = element_gradient(m, v, e);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Point2 d = u.gradient(q.map(t, i)) - g;
        s += q.weights[i] * dot(d, d);
    }
    return measure(t) * s;
}

/// |u - v|_{H1(Omega)}, accumulated over elements in ascending index order.
inline double h1_seminorm_diff(const Mesh2& m, const ScalarField& u, const NodalFunction& v, const QuadratureRule& q) {
    require_matching(m, v);
    double total = 0.0;
    for (std::size_t e = 0; e < m.element_count(); ++e) total += h1_seminorm_diff_sq_on(m, e, u, v, q);
    return std::sqrt(total);
}

/// |u|_{H2(Omega)} = sqrt(int u_xx^2 + 2 u_xy^2 + u_yy^2).
inline double h2_seminorm(const ScalarField& u, const Mesh2& m, const QuadratureRule& q) {
    if (!u.hessian) throw MissingHessian("field '" + u.name + "' does not provide a Hessian");
    const auto& hess = *u.hessian;
    double total = 0.0;
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto t = m.simplex(e);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const auto H = hess(q.map(t, i));
            s += q.weights[i] * (H.xx * H.xx + 2.0 * H.xy * H.xy + H.yy * H.yy);
        }
        total += measure(t) * s;
    }
    return std::sqrt(total);
}

}  // namespace thinfem
