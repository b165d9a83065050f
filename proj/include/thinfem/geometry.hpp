#pragma once

// Metrics on single triangles and tetrahedra: inner angles, diameter,
// inscribed-ball diameter, shape ratio and measure.
//
// Angles are always evaluated as atan2(|cross|, dot). The arccos of a
// normalized dot product loses almost all of its digits near 0 and pi, which
// is exactly where thin elements live.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "thinfem/error.hpp"

namespace thinfem {

/// Coordinates of a point (or a displacement) in R^Dim.
template <int Dim>
struct Point {
    static_assert(Dim == 2 || Dim == 3, "only planar and spatial points are supported");
    std::array<double, Dim> c{};

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    friend constexpr Point operator+(Point a, const Point& b) {
        for (int i = 0; i < Dim; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend constexpr Point operator-(Point a, const Point& b) {
        for (int i = 0; i < Dim; ++i) a.c[i] -= b.c[i];
        return a;
    }
    friend constexpr Point operator*(double s, Point a) {
        for (auto& x : a.c) x *= s;
        return a;
    }
    friend constexpr Point operator*(Point a, double s) { return s * a; }
    friend constexpr bool operator==(const Point&, const Point&) = default;
};

using Point2 = Point<2>;
using Point3 = Point<3>;

template <int Dim>
constexpr double dot(const Point<Dim>& a, const Point<Dim>& b) {
    double s = 0.0;
    for (int i = 0; i < Dim; ++i) s += a[i] * b[i];
    return s;
}

template <int Dim>
double norm(const Point<Dim>& a) {
    if constexpr (Dim == 2) {
        return std::hypot(a[0], a[1]);
    } else {
        return std::hypot(a[0], a[1], a[2]);
    }
}

template <int Dim>
double distance(const Point<Dim>& a, const Point<Dim>& b) {
    return norm(a - b);
}

/// z-component of the planar cross product.
constexpr double cross(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }

constexpr Point3 cross(const Point3& a, const Point3& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

/// Angle in [0, pi] between two nonzero vectors.
template <int Dim>
double angle_between(const Point<Dim>& a, const Point<Dim>& b) {
    if constexpr (Dim == 2) {
        return std::atan2(std::abs(cross(a, b)), dot(a, b));
    } else {
        return std::atan2(norm(cross(a, b)), dot(a, b));
    }
}

/// An n-simplex given by its n+1 ordered vertices.
template <int Dim>
struct Simplex {
    static constexpr int dim = Dim;
    static constexpr int vertex_count = Dim + 1;
    std::array<Point<Dim>, Dim + 1> vertices{};

    const Point<Dim>& operator[](std::size_t i) const { return vertices[i]; }
    Point<Dim>& operator[](std::size_t i) { return vertices[i]; }
};

using Triangle = Simplex<2>;
using Tetrahedron = Simplex<3>;

/// Anything with measure below this is treated as degenerate. The floor only
/// guards against division by zero; arbitrarily thin elements stay valid.
inline constexpr double kDegeneracyFloor = 1e-300;

/// Signed area (2D, positive for counter-clockwise order) or signed volume.
template <int Dim>
double signed_measure(const Simplex<Dim>& s) {
    if constexpr (Dim == 2) {
        return 0.5 * cross(s[1] - s[0], s[2] - s[0]);
    } else {
        return dot(s[1] - s[0], cross(s[2] - s[0], s[3] - s[0])) / 6.0;
    }
}

/// Lebesgue measure |s|. Returns 0 for degenerate input.
template <int Dim>
double measure(const Simplex<Dim>& s) {
    return std::abs(signed_measure(s));
}

template <int Dim>
void require_nondegenerate(const Simplex<Dim>& s) {
    const double m = measure(s);
    if (!(m >= kDegeneracyFloor)) {
        throw DegenerateSimplex("simplex measure " + std::to_string(m) + " is below the degeneracy floor");
    }
}

/// Maximum pairwise vertex distance (h_tau).
template <int Dim>
double diameter(const Simplex<Dim>& s) {
    double d = 0.0;
    for (int i = 0; i <= Dim; ++i) {
        for (int j = i + 1; j <= Dim; ++j) d = std::max(d, distance(s[i], s[j]));
    }
    return d;
}

/// Sum of facet measures: perimeter of a triangle, surface area of a tetrahedron.
template <int Dim>
double boundary_measure(const Simplex<Dim>& s) {
    double total = 0.0;
    if constexpr (Dim == 2) {
        for (int i = 0; i < 3; ++i) total += distance(s[i], s[(i + 1) % 3]);
    } else {
        for (int skip = 0; skip < 4; ++skip) {
            std::array<Point3, 3> f{};
            int k = 0;
            for (int i = 0; i < 4; ++i) {
                if (i != skip) f[k++] = s[i];
            }
            total += 0.5 * norm(cross(f[1] - f[0], f[2] - f[0]));
        }
    }
    return total;
}

/// Diameter of the inscribed ball, 2 n |s| / (sum of facet measures).
template <int Dim>
double inradius_diameter(const Simplex<Dim>& s) {
    require_nondegenerate(s);
    return 2.0 * Dim * measure(s) / boundary_measure(s);
}

/// h_tau / rho_tau. Bounded by D_alpha under a minimum angle condition; at
/// least sqrt(3) for triangles, attained by the equilateral one.
template <int Dim>
double shape_ratio(const Simplex<Dim>& s) {
    return diameter(s) / inradius_diameter(s);
}

struct AngleExtremes {
    double min = 0.0;
    double max = 0.0;
};

/// The three inner angles, entry i being the angle at vertex i.
inline std::array<double, 3> triangle_inner_angles(const Triangle& s) {
    require_nondegenerate(s);
    std::array<double, 3> a{};
    for (int i = 0; i < 3; ++i) {
        const auto& p = s[i];
        a[i] = angle_between(s[(i + 1) % 3] - p, s[(i + 2) % 3] - p);
    }
    return a;
}

inline AngleExtremes triangle_angles(const Triangle& s) {
    const auto a = triangle_inner_angles(s);
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    return {*lo, *hi};
}

/// Solid angle subtended at the origin by the triangle (a, b, c), via
/// tan(Omega/2) = |a.(b x c)| / (|a||b||c| + (a.b)|c| + (a.c)|b| + (b.c)|a|).
inline double solid_angle(const Point3& a, const Point3& b, const Point3& c) {
    const double la = norm(a), lb = norm(b), lc = norm(c);
    const double numer = std::abs(dot(a, cross(b, c)));
    const double denom = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
    return 2.0 * std::atan2(numer, denom);
}

/// Interior dihedral angle along edge (p, q) between the faces through r and s.
inline double dihedral_angle(const Point3& p, const Point3& q, const Point3& r, const Point3& s) {
    const Point3 e = q - p;
    const double ee = dot(e, e);
    const Point3 u = (r - p) - (dot(r - p, e) / ee) * e;
    const Point3 w = (s - p) - (dot(s - p, e) / ee) * e;
    return angle_between(u, w);
}

/// All angles of a tetrahedron that enter the min/max angle definitions.
struct TetrahedronAngleSet {
    std::array<double, 12> face{};      // three per face, face i omits vertex i
    std::array<double, 4> solid{};      // at each vertex
    std::array<double, 6> dihedral{};   // along edges (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
};

inline TetrahedronAngleSet tetrahedron_angle_set(const Tetrahedron& s) {
    require_nondegenerate(s);
    TetrahedronAngleSet out;
    int k = 0;
    for (int skip = 0; skip < 4; ++skip) {
        std::array<int, 3> f{};
        int m = 0;
        for (int i = 0; i < 4; ++i) {
            if (i != skip) f[m++] = i;
        }
        for (int i = 0; i < 3; ++i) {
            const auto& p = s[f[i]];
            out.face[k++] = angle_between(s[f[(i + 1) % 3]] - p, s[f[(i + 2) % 3]] - p);
        }
    }
    for (int i = 0; i < 4; ++i) {
        const auto& p = s[i];
        out.solid[i] = solid_angle(s[(i + 1) % 4] - p, s[(i + 2) % 4] - p, s[(i + 3) % 4] - p);
    }
    k = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            std::array<int, 2> other{};
            int m = 0;
            for (int l = 0; l < 4; ++l) {
                if (l != i && l != j) other[m++] = l;
            }
            out.dihedral[k++] = dihedral_angle(s[i], s[j], s[other[0]], s[other[1]]);
        }
    }
    return out;
}

/// theta_min over face and solid angles, theta_max over face and dihedral
/// angles. Solid angles are in steradians and compared directly with planar
/// radians.
inline AngleExtremes tetrahedron_angles(const Tetrahedron& s) {
    const auto set = tetrahedron_angle_set(s);
    const double face_min = *std::min_element(set.face.begin(), set.face.end());
    const double face_max = *std::max_element(set.face.begin(), set.face.end());
    return {std::min(face_min, *std::min_element(set.solid.begin(), set.solid.end())),
            std::max(face_max, *std::max_element(set.dihedral.begin(), set.dihedral.end()))};
}

/// Dimension-dispatching form of triangle_angles / tetrahedron_angles.
template <int Dim>
AngleExtremes simplex_angles(const Simplex<Dim>& s) {
    if constexpr (Dim == 2) {
        return triangle_angles(s);
    } else {
        return tetrahedron_angles(s);
    }
}

}  // namespace thinfem
