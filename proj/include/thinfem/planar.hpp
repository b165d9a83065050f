#pragma once

// Planar predicates shared by the mesh checker and the covering verifier:
// barycentric coordinates, tolerant point-in-triangle tests, convex clipping
// and polygonal domains.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "thinfem/geometry.hpp"

namespace thinfem {

using Polygon = std::vector<Point2>;

inline double orient(const Point2& a, const Point2& b, const Point2& c) { return cross(b - a, c - a); }

/// Barycentric coordinates of p with respect to t. Entries sum to one;
/// all nonnegative iff p lies in the closed triangle.
inline std::array<double, 3> barycentric(const Triangle& t, const Point2& p) {
    const double area2 = orient(t[0], t[1], t[2]);
    if (!(std::abs(area2) >= 2.0 * kDegeneracyFloor)) {
        throw DegenerateSimplex("barycentric coordinates requested on a degenerate triangle");
    }
    const double l1 = orient(p, t[2], t[0]) / area2;
    const double l2 = orient(p, t[0], t[1]) / area2;
    return {1.0 - l1 - l2, l1, l2};
}

/// Signed distance from p to the line through edge (t[i], t[i+1]); positive
/// on the side of the opposite vertex.
inline double inward_edge_distance(const Triangle& t, int i, const Point2& p) {
    const Point2& a = t[i];
    const Point2& b = t[(i + 1) % 3];
    const double sign = orient(t[0], t[1], t[2]) >= 0.0 ? 1.0 : -1.0;
    return sign * orient(a, b, p) / distance(a, b);
}

/// p lies in the closed triangle, allowing an outward slack of `tol` (length units).
inline bool contains_closed(const Triangle& t, const Point2& p, double tol) {
    for (int i = 0; i < 3; ++i) {
        if (inward_edge_distance(t, i, p) < -tol) return false;
    }
    return true;
}

/// p lies at least `tol` inside every edge of the triangle.
inline bool contains_open(const Triangle& t, const Point2& p, double tol) {
    for (int i = 0; i < 3; ++i) {
        if (inward_edge_distance(t, i, p) <= tol) return false;
    }
    return true;
}

inline double distance_to_segment(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + s * ab);
}

inline double polygon_signed_area(const Polygon& poly) {
    double s = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * s;
}

inline Point2 polygon_centroid(const Polygon& poly) {
    const double a = polygon_signed_area(poly);
    Point2 c{};
    if (a == 0.0) {
        for (const auto& p : poly) c = c + p;
        return (1.0 / static_cast<double>(std::max<std::size_t>(poly.size(), 1))) * c;
    }
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        const double w = cross(p, q);
        c = c + w * (p + q);
    }
    return (1.0 / (6.0 * a)) * c;
}

inline Polygon counter_clockwise(const Triangle& t) {
    if (orient(t[0], t[1], t[2]) >= 0.0) return {t[0], t[1], t[2]};
    return {t[0], t[2], t[1]};
}

/// Sutherland-Hodgman clip of `subject` by the convex, counter-clockwise `clip`.
inline Polygon clip_convex(Polygon subject, const Polygon& clip) {
    for (std::size_t e = 0, n = clip.size(); e < n && !subject.empty(); ++e) {
        const Point2& a = clip[e];
        const Point2& b = clip[(e + 1) % n];
        Polygon out;
        out.reserve(subject.size() + 1);
        for (std::size_t i = 0, m = subject.size(); i < m; ++i) {
            const Point2& p = subject[i];
            const Point2& q = subject[(i + 1) % m];
            const double dp = orient(a, b, p);
            const double dq = orient(a, b, q);
            if (dp >= 0.0) out.push_back(p);
            if ((dp >= 0.0) != (dq >= 0.0)) {
                const double s = dp / (dp - dq);
                out.push_back(p + s * (q - p));
            }
        }
        subject = std::move(out);
    }
    return subject;
}

/// Common region of two triangles (possibly empty or degenerate).
inline Polygon triangle_intersection(const Triangle& a, const Triangle& b) {
    return clip_convex(counter_clockwise(a), counter_clockwise(b));
}

/// A closed polygonal domain given by its boundary vertices in
/// counter-clockwise order.
class PolygonDomain {
public:
    explicit PolygonDomain(Polygon boundary) : boundary_(std::move(boundary)) {
        if (boundary_.size() < 3) throw InvalidParam("a polygonal domain needs at least three vertices");
        if (polygon_signed_area(boundary_) < 0.0) std::reverse(boundary_.begin(), boundary_.end());
    }

    static PolygonDomain unit_square() { return PolygonDomain({{{0, 0}}, {{1, 0}}, {{1, 1}}, {{0, 1}}}); }

    const Polygon& boundary() const { return boundary_; }
    double measure() const { return polygon_signed_area(boundary_); }

    double boundary_distance(const Point2& p) const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0, n = boundary_.size(); i < n; ++i) {
            d = std::min(d, distance_to_segment(p, boundary_[i], boundary_[(i + 1) % n]));
        }
        return d;
    }

    bool on_boundary(const Point2& p, double tol) const { return boundary_distance(p) <= tol; }

    /// Closed containment: inside, or within `tol` of the boundary.
    bool contains(const Point2& p, double tol) const {
        if (on_boundary(p, tol)) return true;
        bool inside = false;
        for (std::size_t i = 0, j = boundary_.size() - 1; i < boundary_.size(); j = i++) {
            const auto& a = boundary_[i];
            const auto& b = boundary_[j];
            if ((a[1] > p[1]) != (b[1] > p[1])) {
                const double x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if (p[0] < x) inside = !inside;
            }
        }
        return inside;
    }

    bool is_convex() const {
        for (std::size_t i = 0, n = boundary_.size(); i < n; ++i) {
            if (orient(boundary_[i], boundary_[(i + 1) % n], boundary_[(i + 2) % n]) < 0.0) return false;
        }
        return true;
    }

    /// Open triangle contained in the domain. Exact for convex domains (vertex
    /// test); otherwise vertices plus eight samples per edge.
    bool contains_triangle(const Triangle& t, double tol) const {
        for (int i = 0; i < 3; ++i) {
            if (!contains(t[i], tol)) return false;
        }
        if (is_convex()) return true;
        constexpr int kSamples = 8;
        for (int i = 0; i < 3; ++i) {
            for (int s = 1; s <= kSamples; ++s) {
                const double w = static_cast<double>(s) / (kSamples + 1);
                if (!contains(t[i] + w * (t[(i + 1) % 3] - t[i]), tol)) return false;
            }
        }
        return true;
    }

private:
    Polygon boundary_;
};

}  // namespace thinfem
