#pragma once

// Virtual covers of bad elements and the checks that make the modified
// interpolant well defined.
//
// A cover plan lists well-shaped triangles T_k ("virtual" simplices, usually
// not mesh elements) together with disjoint clusters Q_k of mesh elements
// lying inside them. Two checkers are provided:
//
//  * verify_assumption_general: the five-condition covering assumption with
//    parameters (theta, psi, C, M, N);
//  * verify_assumption_isosceles: the planar special case in which every
//    element with theta_max > pi - phi is covered by the isosceles triangle
//    with base angles phi erected on its longest edge.
//
// Only planar meshes are supported by the checkers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "thinfem/error.hpp"
#include "thinfem/geometry.hpp"
#include "thinfem/mesh.hpp"
#include "thinfem/planar.hpp"
#include "thinfem/quality.hpp"
#include "thinfem/spatial.hpp"

namespace thinfem {

struct VirtualCover {
    Triangle simplex;              ///< T_k
    std::vector<Index> cluster;    ///< Q_k, element ids
};

struct CoverParams {
    double theta = std::numbers::pi / 6;
    double psi = std::numbers::pi / 6;
    double C = 1.0;
    int M = 1;
    int N = 1;
};

struct CoverPlan {
    std::vector<VirtualCover> covers;
    CoverParams params;
};

struct Witness {
    std::vector<std::size_t> covers;
    std::vector<Index> elements;
    std::vector<Index> vertices;
    std::string detail;
};

struct ConditionVerdict {
    std::string name;
    bool passed = true;
    std::size_t violation_count = 0;
    std::vector<Witness> witnesses;  ///< first kMaxWitnesses violations

    static constexpr std::size_t kMaxWitnesses = 64;

    void fail(Witness w) {
        passed = false;
        if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
        ++violation_count;
    }
};

struct CheckReport {
    std::string assumption;
    bool satisfied = true;
    std::vector<ConditionVerdict> conditions;
    int multiplicity = 0;
    std::size_t max_cluster_size = 0;
    double max_cover_h_ratio = 0.0;  ///< max_k h_{T_k} / h
    double mesh_h = 0.0;

    const ConditionVerdict& condition(std::size_t one_based) const { return conditions.at(one_based - 1); }
};

/// Tolerances used by every set-membership test: vertex coincidence, boundary
/// membership and hull membership use 1e-9 h; angle thresholds allow 1e-12 rad.
inline constexpr double kVertexTolerance = 1e-9;
inline constexpr double kAngleTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Hulls

/// Conv(v(T1) cap v(T2)): the common vertices (coincident within tol), as a
/// point list of 0 to 3 entries.
inline Polygon shared_hull(const Triangle& a, const Triangle& b, double tol) {
    Polygon out;
    for (const auto& p : a.vertices) {
        for (const auto& q : b.vertices) {
            if (distance(p, q) <= tol) {
                out.push_back(p);
                break;
            }
        }
    }
    return out;
}

/// Conv(v(T) cap boundary): vertices of T on the domain boundary.
inline Polygon boundary_hull(const Triangle& t, const PolygonDomain& domain, double tol) {
    Polygon out;
    for (const auto& p : t.vertices) {
        if (domain.on_boundary(p, tol)) out.push_back(p);
    }
    return out;
}

/// Membership of p in the convex hull of at most three points.
inline bool in_hull(const Polygon& hull, const Point2& p, double tol) {
    switch (hull.size()) {
        case 0: return false;
        case 1: return distance(hull[0], p) <= tol;
        case 2: return distance_to_segment(p, hull[0], hull[1]) <= tol;
        case 3: return contains_closed(Triangle{{hull[0], hull[1], hull[2]}}, p, tol);
        default: throw InvalidParam("hull of more than three points");
    }
}

// ---------------------------------------------------------------------------
// Plan validation and overlap measurement

inline void validate_plan(const Mesh2& m, const CoverPlan& plan) {
    const auto& p = plan.params;
    if (!(p.theta > 0.0 && p.theta <= std::numbers::pi / 3)) throw InvalidPlan("theta must lie in (0, pi/3]");
    if (!(p.psi > 0.0 && p.psi <= std::numbers::pi / 3)) throw InvalidPlan("psi must lie in (0, pi/3]");
    if (!(p.C >= 1.0)) throw InvalidPlan("C must be at least 1");
    if (p.M < 1 || p.N < 1) throw InvalidPlan("M and N must be positive integers");
    for (std::size_t k = 0; k < plan.covers.size(); ++k) {
        const auto& c = plan.covers[k];
        if (c.cluster.empty()) throw InvalidPlan("cover " + std::to_string(k) + " has an empty cluster");
        for (auto e : c.cluster) {
            if (e >= m.element_count()) {
                throw InvalidPlan("cover " + std::to_string(k) + " references element " + std::to_string(e) +
                                  " of " + std::to_string(m.element_count()));
            }
        }
        if (!(measure(c.simplex) >= kDegeneracyFloor)) {
            throw InvalidPlan("cover " + std::to_string(k) + " is a degenerate triangle");
        }
    }
}

struct CoverOverlap {
    std::size_t first;
    std::size_t second;
    Point2 witness;  ///< centroid of the common open region
};

/// Pairs of covers whose open interiors intersect. Intersections with area
/// below 1e-10 of the smaller cover count as touching, not overlapping.
inline std::vector<CoverOverlap> cover_overlaps(const std::vector<VirtualCover>& covers) {
    std::vector<Box2> boxes;
    boxes.reserve(covers.size());
    for (const auto& c : covers) boxes.push_back(bounding_box(c.simplex.vertices));
    std::vector<CoverOverlap> out;
    for_each_overlapping_pair(boxes, [&](std::size_t i, std::size_t j) {
        const auto& a = covers[i].simplex;
        const auto& b = covers[j].simplex;
        const auto poly = triangle_intersection(a, b);
        if (poly.size() < 3) return;
        const double area = std::abs(polygon_signed_area(poly));
        if (area > 1e-10 * std::min(measure(a), measure(b))) out.push_back({i, j, polygon_centroid(poly)});
    });
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::pair(x.first, x.second) < std::pair(y.first, y.second);
    });
    return out;
}

/// Largest number of open covers containing one overlap witness point; 1 if
/// covers exist but none overlap, 0 for an empty plan. Exact for covers in
/// generic position; contrived arrangements can be underestimated.
inline int overlap_multiplicity(const std::vector<VirtualCover>& covers, const std::vector<CoverOverlap>& overlaps) {
    if (covers.empty()) return 0;
    std::vector<std::vector<std::size_t>> neighbours(covers.size());
    for (const auto& o : overlaps) {
        neighbours[o.first].push_back(o.second);
        neighbours[o.second].push_back(o.first);
    }
    int best = 1;
    for (const auto& o : overlaps) {
        int count = 1;
        for (auto j : neighbours[o.first]) {
            const auto& t = covers[j].simplex;
            const double tol = -1e-12 * diameter(t);  // admit the witness when it sits on an edge by rounding
            if (contains_open(t, o.witness, tol)) ++count;
        }
        best = std::max(best, count);
    }
    return best;
}

// ---------------------------------------------------------------------------
// General assumption

inline CheckReport verify_assumption_general(const Mesh2& m, const CoverPlan& plan,
                                             const PolygonDomain& domain = PolygonDomain::unit_square()) {
    validate_plan(m, plan);
    const auto& prm = plan.params;
    const double h = mesh_h(m);
    const double tol = kVertexTolerance * h;
    const auto& covers = plan.covers;

    CheckReport rep;
    rep.assumption = "general";
    rep.mesh_h = h;
    rep.conditions.resize(5);
    rep.conditions[0].name = "(1) cover shape, size, placement and overlap multiplicity";
    rep.conditions[1].name = "(2) bad elements clustered inside covers";
    rep.conditions[2].name = "(3) minimum angle of uncovered neighbours";
    rep.conditions[3].name = "(4) cross-cluster vertices in shared hulls";
    rep.conditions[4].name = "(5) boundary vertices in boundary hulls";

    // (1)
    auto& c1 = rep.conditions[0];
    for (std::size_t k = 0; k < covers.size(); ++k) {
        const auto& T = covers[k].simplex;
        const auto ang = triangle_angles(T);
        if (ang.min < prm.psi - kAngleTolerance) {
            c1.fail({{k}, {}, {}, "cover min angle " + std::to_string(ang.min) + " < psi"});
        }
        const double ratio = diameter(T) / h;
        rep.max_cover_h_ratio = std::max(rep.max_cover_h_ratio, ratio);
        if (ratio > prm.C * (1.0 + 1e-12)) {
            c1.fail({{k}, {}, {}, "cover diameter ratio " + std::to_string(ratio) + " > C"});
        }
        if (!domain.contains_triangle(T, tol)) c1.fail({{k}, {}, {}, "cover interior leaves the domain"});
    }
    const auto overlaps = cover_overlaps(covers);
    rep.multiplicity = overlap_multiplicity(covers, overlaps);
    if (rep.multiplicity > prm.M) {
        for (const auto& o : overlaps) {
            c1.fail({{o.first, o.second}, {}, {}, "overlap multiplicity " + std::to_string(rep.multiplicity) + " > M"});
        }
    }

    // (2)
    auto& c2 = rep.conditions[1];
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(m.element_count(), kNone);
    for (std::size_t k = 0; k < covers.size(); ++k) {
        const auto& cl = covers[k].cluster;
        rep.max_cluster_size = std::max(rep.max_cluster_size, cl.size());
        if (cl.size() > static_cast<std::size_t>(prm.N)) {
            c2.fail({{k}, cl, {}, "cluster size " + std::to_string(cl.size()) + " > N"});
        }
        for (auto e : cl) {
            if (owner[e] != kNone) {
                c2.fail({{owner[e], k}, {e}, {}, "element belongs to two clusters"});
                continue;
            }
            owner[e] = k;
            const auto& el = m.element(e);
            for (auto v : el) {
                if (!contains_closed(covers[k].simplex, m.point(v), tol)) {
                    c2.fail({{k}, {e}, {v}, "cluster element not inside its cover"});
                }
            }
        }
    }
    const auto cls = classify(m, prm.theta);
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        if (cls.classes[e] == ElementClass::Bad && owner[e] == kNone) {
            c2.fail({{}, {static_cast<Index>(e)}, {}, "bad element in no cluster"});
        }
    }

    // (3)
    auto& c3 = rep.conditions[2];
    const VertexStar star(m);
    std::vector<double> min_angle(m.element_count());
    for (std::size_t e = 0; e < m.element_count(); ++e) min_angle[e] = triangle_angles(m.simplex(e)).min;
    auto is_cover_vertex = [&](std::size_t k, const Point2& p) {
        for (const auto& q : covers[k].simplex.vertices) {
            if (distance(p, q) <= tol) return true;
        }
        return false;
    };
    std::set<std::pair<Index, Index>> reported;
    for (std::size_t k = 0; k < covers.size(); ++k) {
        for (auto e1 : covers[k].cluster) {
            if (owner[e1] != k) continue;
            for (auto v : m.element(e1)) {
                if (is_cover_vertex(k, m.point(v))) continue;
                for (auto e0 : star.of(v)) {
                    if (owner[e0] != kNone) continue;
                    if (min_angle[e0] >= prm.theta - kAngleTolerance) continue;
                    if (!reported.emplace(e0, v).second) continue;
                    c3.fail({{k}, {e0, e1}, {v}, "uncovered neighbour min angle " + std::to_string(min_angle[e0]) + " < theta"});
                }
            }
        }
    }

    // (4)
    auto& c4 = rep.conditions[3];
    for (Index v = 0; v < m.vertex_count(); ++v) {
        std::vector<std::size_t> ks;
        for (auto e : star.of(v)) {
            if (owner[e] != kNone) ks.push_back(owner[e]);
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        for (std::size_t a = 0; a < ks.size(); ++a) {
            for (std::size_t b = a + 1; b < ks.size(); ++b) {
                const auto hull = shared_hull(covers[ks[a]].simplex, covers[ks[b]].simplex, tol);
                if (!in_hull(hull, m.point(v), tol)) {
                    c4.fail({{ks[a], ks[b]}, {}, {v}, "shared vertex outside Conv(v(T_k) cap v(T_l))"});
                }
            }
        }
    }

    // (5)
    auto& c5 = rep.conditions[4];
    for (std::size_t k = 0; k < covers.size(); ++k) {
        const auto bh = boundary_hull(covers[k].simplex, domain, tol);
        for (auto e : covers[k].cluster) {
            for (auto v : m.element(e)) {
                const auto& p = m.point(v);
                if (domain.on_boundary(p, tol) && !in_hull(bh, p, tol)) {
                    c5.fail({{k}, {e}, {v}, "boundary vertex outside Conv(v(T_k) cap boundary)"});
                }
            }
        }
    }

    rep.satisfied = std::all_of(rep.conditions.begin(), rep.conditions.end(), [](const auto& c) { return c.passed; });
    return rep;
}

template <int Dim>
CheckReport verify_assumption_general(const SimplexMesh<Dim>&, const CoverPlan&) requires(Dim == 3) {
    throw DimensionUnsupported("covering verification is implemented for planar meshes only");
}

// ---------------------------------------------------------------------------
// Isosceles special case

/// Isosceles triangle with base angles phi on the segment (p, q), apex on the
/// side of `side`. Returned counter-clockwise.
inline Triangle isosceles_on_edge(const Point2& p, const Point2& q, const Point2& side, double phi) {
    const Point2 e = q - p;
    Point2 n{{-e[1], e[0]}};
    if (dot(n, side - p) < 0.0) n = -1.0 * n;
    const Point2 apex = 0.5 * (p + q) + (0.5 * std::tan(phi)) * n;
    Triangle t{{p, q, apex}};
    if (signed_measure(t) < 0.0) std::swap(t.vertices[0], t.vertices[1]);
    return t;
}

/// Index i such that the longest edge of t is the one opposite vertex i.
/// Throws AmbiguousLongestEdge when two edges tie within 1e-12 relative.
inline int longest_edge_opposite(const Triangle& t) {
    std::array<double, 3> len{};
    for (int i = 0; i < 3; ++i) len[i] = distance(t[(i + 1) % 3], t[(i + 2) % 3]);
    const int best = static_cast<int>(std::max_element(len.begin(), len.end()) - len.begin());
    for (int i = 0; i < 3; ++i) {
        if (i != best && len[i] >= len[best] * (1.0 - 1e-12)) {
            throw AmbiguousLongestEdge("two edges tie for longest");
        }
    }
    return best;
}

inline void require_isosceles_angle(double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi / 2)) throw InvalidParam("phi must lie in (0, pi/2)");
}

/// One cover per element with theta_max > pi - phi: the isosceles triangle
/// with base angles phi on the element's longest edge, apex on the element's
/// side. Parameters: theta = phi/2, psi = min angle of the covers
/// (= phi for phi <= pi/3), C = max(1, max h_T / h), M = N = 1.
inline CoverPlan derive_cover_isosceles(const Mesh2& m, double phi) {
    require_isosceles_angle(phi);
    CoverPlan plan;
    const double h = mesh_h(m);
    double ratio = 0.0;
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto t = m.simplex(e);
        const auto ang = triangle_angles(t);
        if (!(ang.max > std::numbers::pi - phi)) continue;
        const int i = longest_edge_opposite(t);
        auto T = isosceles_on_edge(t[(i + 1) % 3], t[(i + 2) % 3], t[i], phi);
        ratio = std::max(ratio, diameter(T) / h);
        plan.covers.push_back({T, {static_cast<Index>(e)}});
    }
    plan.params.theta = phi / 2;
    plan.params.psi = std::min(phi, std::numbers::pi - 2 * phi);
    plan.params.C = std::max(1.0, ratio);
    plan.params.M = 1;
    plan.params.N = 1;
    return plan;
}

inline CheckReport verify_assumption_isosceles(const Mesh2& m, double phi,
                                               const PolygonDomain& domain = PolygonDomain::unit_square()) {
    const auto plan = derive_cover_isosceles(m, phi);
    const double h = mesh_h(m);
    const double tol = kVertexTolerance * h;
    const auto& covers = plan.covers;

    CheckReport rep;
    rep.assumption = "isosceles";
    rep.mesh_h = h;
    rep.conditions.resize(2);
    rep.conditions[0].name = "(1) covers inside the domain with disjoint interiors";
    rep.conditions[1].name = "(2) bad elements inside covers on their longest edge; apex neighbours have min angle >= phi/2";

    auto& c1 = rep.conditions[0];
    for (std::size_t k = 0; k < covers.size(); ++k) {
        rep.max_cover_h_ratio = std::max(rep.max_cover_h_ratio, diameter(covers[k].simplex) / h);
        if (!domain.contains_triangle(covers[k].simplex, tol)) c1.fail({{k}, {}, {}, "cover interior leaves the domain"});
    }
    const auto overlaps = cover_overlaps(covers);
    rep.multiplicity = overlap_multiplicity(covers, overlaps);
    for (const auto& o : overlaps) c1.fail({{o.first, o.second}, {}, {}, "cover interiors intersect"});

    auto& c2 = rep.conditions[1];
    std::vector<bool> covered(m.element_count(), false);
    for (const auto& c : covers) covered[c.cluster.front()] = true;
    const VertexStar star(m);
    std::set<std::pair<Index, Index>> reported;
    for (std::size_t k = 0; k < covers.size(); ++k) {
        const auto& T = covers[k].simplex;
        const Index e = covers[k].cluster.front();
        rep.max_cluster_size = 1;
        const auto t = m.simplex(e);
        const int i = longest_edge_opposite(t);
        // the base of T is the element's longest edge by construction; the
        // remaining vertex must sit inside T
        if (!contains_closed(T, t[i], tol)) c2.fail({{k}, {e}, {m.element(e)[i]}, "bad element not inside its cover"});
        const Index apex = m.element(e)[i];
        for (auto nb : star.of(apex)) {
            if (covered[nb]) continue;
            const double a = triangle_angles(m.simplex(nb)).min;
            if (a >= phi / 2 - kAngleTolerance) continue;
            if (!reported.emplace(nb, apex).second) continue;
            c2.fail({{k}, {nb, e}, {apex}, "element sharing the apex has min angle " + std::to_string(a) + " < phi/2"});
        }
    }
    rep.satisfied = c1.passed && c2.passed;
    return rep;
}

// ---------------------------------------------------------------------------
// Constants

/// E = sqrt(A^2 (n+2 + C^2 M) + 2 (n+1)(n+2) pi B^2 C^(4-n) D M N / (n theta)).
/// A, B, D stand for the interpolation, embedding and shape-regularity
/// constants, which are known to exist but have no closed form; psi enters
/// only through them.
inline double theorem_constant_E(int n, double theta, double psi, double C, int M, int N, double A, double B,
                                 double D) {
    if (n != 2 && n != 3) throw InvalidParam("n must be 2 or 3");
    if (!(theta > 0 && psi > 0 && C > 0 && M > 0 && N > 0 && A > 0 && B > 0 && D > 0)) {
        throw InvalidParam("all inputs of E must be positive");
    }
    const double first = A * A * (n + 2 + C * C * M);
    const double second = 2.0 * (n + 1) * (n + 2) * std::numbers::pi * B * B * std::pow(C, 4 - n) * D * M * N / (n * theta);
    return std::sqrt(first + second);
}

struct ValenceCheck {
    bool ok = true;
    int bound = 0;         ///< floor(2 (n-1) pi / theta)
    int max_count = 0;     ///< largest measured count
    std::optional<Index> witness_element;
    std::optional<Index> witness_vertex;
};

/// For each cluster element and each of its vertices, counts the uncovered
/// elements with min angle >= theta that share the vertex, and compares the
/// largest count with floor(2 (n-1) pi / theta).
inline ValenceCheck vertex_valence_bound_check(const Mesh2& m, const CoverPlan& plan) {
    validate_plan(m, plan);
    constexpr int n = 2;
    const double theta = plan.params.theta;
    ValenceCheck out;
    out.bound = static_cast<int>(std::floor(2.0 * (n - 1) * std::numbers::pi / theta));
    std::vector<bool> covered(m.element_count(), false);
    for (const auto& c : plan.covers) {
        for (auto e : c.cluster) covered[e] = true;
    }
    const VertexStar star(m);
    for (const auto& c : plan.covers) {
        for (auto beta : c.cluster) {
            for (auto v : m.element(beta)) {
                int count = 0;
                for (auto t : star.of(v)) {
                    if (!covered[t] && triangle_angles(m.simplex(t)).min >= theta) ++count;
                }
                if (count > out.max_count) {
                    out.max_count = count;
                    out.witness_element = beta;
                    out.witness_vertex = v;
                }
            }
        }
    }
    out.ok = out.max_count <= out.bound;
    return out;
}

}  // namespace thinfem
