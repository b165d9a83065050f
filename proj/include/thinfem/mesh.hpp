#pragma once

// Conformal simplicial meshes, the structured generators used throughout the
// experiments, and a conformity checker.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "thinfem/error.hpp"
#include "thinfem/geometry.hpp"
#include "thinfem/planar.hpp"
#include "thinfem/spatial.hpp"

namespace thinfem {

using Index = std::uint32_t;

/// Vertex table, element connectivity and boundary vertex markers.
/// Immutable once constructed.
template <int Dim>
class SimplexMesh {
public:
    static constexpr int dim = Dim;
    using Element = std::array<Index, Dim + 1>;

    SimplexMesh() = default;

    SimplexMesh(std::vector<Point<Dim>> points, std::vector<Element> elements, std::vector<Index> boundary)
        : points_(std::move(points)), elements_(std::move(elements)), boundary_(std::move(boundary)) {
        const auto n = points_.size();
        for (std::size_t e = 0; e < elements_.size(); ++e) {
            const auto& el = elements_[e];
            for (int i = 0; i <= Dim; ++i) {
                if (el[i] >= n) {
                    throw InvalidMesh("element " + std::to_string(e) + " references vertex " +
                                      std::to_string(el[i]) + " of " + std::to_string(n));
                }
                for (int j = 0; j < i; ++j) {
                    if (el[i] == el[j]) throw InvalidMesh("element " + std::to_string(e) + " repeats a vertex");
                }
            }
        }
        std::sort(boundary_.begin(), boundary_.end());
        boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
        if (!boundary_.empty() && boundary_.back() >= n) {
            throw InvalidMesh("boundary marker " + std::to_string(boundary_.back()) + " is out of range");
        }
        on_boundary_.assign(n, false);
        for (auto b : boundary_) on_boundary_[b] = true;
    }

    std::size_t vertex_count() const { return points_.size(); }
    std::size_t element_count() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }

    const std::vector<Point<Dim>>& points() const { return points_; }
    const std::vector<Element>& elements() const { return elements_; }
    /// Sorted, duplicate-free.
    const std::vector<Index>& boundary_vertices() const { return boundary_; }

    const Point<Dim>& point(Index v) const { return points_[v]; }
    const Element& element(std::size_t e) const { return elements_[e]; }
    bool is_boundary(Index v) const { return on_boundary_[v]; }

    Simplex<Dim> simplex(std::size_t e) const {
        Simplex<Dim> s;
        for (int i = 0; i <= Dim; ++i) s.vertices[i] = points_[elements_[e][i]];
        return s;
    }

private:
    std::vector<Point<Dim>> points_;
    std::vector<Element> elements_;
    std::vector<Index> boundary_;
    std::vector<bool> on_boundary_;
};

using Mesh2 = SimplexMesh<2>;
using Mesh3 = SimplexMesh<3>;

/// h = max element diameter.
template <int Dim>
double mesh_h(const SimplexMesh<Dim>& m) {
    if (m.empty()) throw EmptyMesh("mesh has no elements");
    double h = 0.0;
    for (std::size_t e = 0; e < m.element_count(); ++e) h = std::max(h, diameter(m.simplex(e)));
    return h;
}

template <int Dim>
double total_measure(const SimplexMesh<Dim>& m) {
    double s = 0.0;
    for (std::size_t e = 0; e < m.element_count(); ++e) s += measure(m.simplex(e));
    return s;
}

/// Elements incident to each vertex, in ascending element order (CSR layout).
struct VertexStar {
    std::vector<std::size_t> offsets;
    std::vector<Index> elements;

    template <int Dim>
    explicit VertexStar(const SimplexMesh<Dim>& m) : offsets(m.vertex_count() + 1, 0) {
        for (const auto& el : m.elements()) {
            for (auto v : el) ++offsets[v + 1];
        }
        for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
        elements.resize(offsets.back());
        std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
        for (std::size_t e = 0; e < m.element_count(); ++e) {
            for (auto v : m.element(e)) elements[fill[v]++] = static_cast<Index>(e);
        }
    }

    std::span<const Index> of(Index v) const {
        return {elements.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
};

// ---------------------------------------------------------------------------
// Generators on the unit square. Vertex numbering is fixed by index
// arithmetic: grid vertex (i, j) -> j (K+1) + i, followed by the per-cell
// interior points. All elements are counter-clockwise.

namespace detail {

inline void require_cells(int K) {
    if (K < 1) throw InvalidParam("K must be a positive integer, got " + std::to_string(K));
}

inline std::vector<Point2> grid_points(int K) {
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(K + 1) * (K + 1));
    for (int j = 0; j <= K; ++j) {
        for (int i = 0; i <= K; ++i) pts.push_back({{static_cast<double>(i) / K, static_cast<double>(j) / K}});
    }
    return pts;
}

inline std::vector<Index> grid_boundary(int K) {
    std::vector<Index> b;
    for (int j = 0; j <= K; ++j) {
        for (int i = 0; i <= K; ++i) {
            if (i == 0 || j == 0 || i == K || j == K) b.push_back(static_cast<Index>(j * (K + 1) + i));
        }
    }
    return b;
}

/// Corners A=(x,y), B=(x+k,y), C=(x+k,y+k), D=(x,y+k) of cell (i, j).
struct CellCorners {
    Index a, b, c, d;
};

inline CellCorners cell_corners(int K, int i, int j) {
    const auto row = static_cast<Index>(K + 1);
    const auto a = static_cast<Index>(j) * row + static_cast<Index>(i);
    return {a, a + 1, a + row + 1, a + row};
}

}  // namespace detail

/// Unit square split into K^2 cells, each cut into six triangles around the
/// points E=(x+k/2, y+alpha k) and F=(x+k/2, y+(1-alpha) k). Per cell the
/// elements are, in order: ABE, BCE, ECF, AEF, CDF, AFD. ABE and CDF are the
/// flat ones as alpha -> 0.
inline Mesh2 generate_square_six(int K, double alpha) {
    detail::require_cells(K);
    if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidParam("alpha must lie in (0, 1/2)");
    auto pts = detail::grid_points(K);
    const auto base = static_cast<Index>(pts.size());
    std::vector<Mesh2::Element> els;
    els.reserve(6 * static_cast<std::size_t>(K) * K);
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < K; ++i) {
            const double xm = (i + 0.5) / K;
            pts.push_back({{xm, (j + alpha) / K}});
            pts.push_back({{xm, (j + 1 - alpha) / K}});
            const auto [a, b, c, d] = detail::cell_corners(K, i, j);
            const Index e = base + 2 * static_cast<Index>(j * K + i);
            const Index f = e + 1;
            els.push_back({a, b, e});
            els.push_back({b, c, e});
            els.push_back({e, c, f});
            els.push_back({a, e, f});
            els.push_back({c, d, f});
            els.push_back({a, f, d});
        }
    }
    return Mesh2(std::move(pts), std::move(els), detail::grid_boundary(K));
}

/// K^2 cells, each split along the diagonal (x,y)-(x+k,y+k) into the right
/// isosceles triangles ABC and ACD (element 2c and 2c+1 of cell c = jK+i).
inline Mesh2 generate_uniform_right(int K) {
    detail::require_cells(K);
    auto pts = detail::grid_points(K);
    std::vector<Mesh2::Element> els;
    els.reserve(2 * static_cast<std::size_t>(K) * K);
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < K; ++i) {
            const auto [a, b, c, d] = detail::cell_corners(K, i, j);
            els.push_back({a, b, c});
            els.push_back({a, c, d});
        }
    }
    return Mesh2(std::move(pts), std::move(els), detail::grid_boundary(K));
}

/// Refinement of generate_uniform_right(K): two points are placed on the
/// anti-diagonal B-D at parameters 1/2 - eps (E) and 1/2 + eps (F) measured
/// from B, and each cell becomes ABE, BCE, AEC | ACF, CDF, AFD. AEC and ACF
/// straddle the diagonal and flatten as eps -> 0. The interior connectivity
/// follows the published drawing of this mesh.
inline Mesh2 generate_refined_diag(int K, double eps = 0.05) {
    detail::require_cells(K);
    if (!(eps > 0.0 && eps < 0.5)) throw InvalidParam("eps must lie in (0, 1/2)");
    auto pts = detail::grid_points(K);
    const auto base = static_cast<Index>(pts.size());
    std::vector<Mesh2::Element> els;
    els.reserve(6 * static_cast<std::size_t>(K) * K);
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < K; ++i) {
            pts.push_back({{(i + 0.5 + eps) / K, (j + 0.5 - eps) / K}});
            pts.push_back({{(i + 0.5 - eps) / K, (j + 0.5 + eps) / K}});
            const auto [a, b, c, d] = detail::cell_corners(K, i, j);
            const Index e = base + 2 * static_cast<Index>(j * K + i);
            const Index f = e + 1;
            els.push_back({a, b, e});
            els.push_back({b, c, e});
            els.push_back({a, e, c});
            els.push_back({a, c, f});
            els.push_back({c, d, f});
            els.push_back({a, f, d});
        }
    }
    return Mesh2(std::move(pts), std::move(els), detail::grid_boundary(K));
}

/// Element of generate_uniform_right(K) containing element `child` of
/// generate_refined_diag(K, eps).
inline std::size_t refined_diag_parent(std::size_t child) {
    return 2 * (child / 6) + (child % 6 >= 3 ? 1 : 0);
}

/// Thin element of generate_refined_diag straddling the diagonal inside `parent`.
inline std::size_t refined_diag_thin_child(std::size_t parent) {
    return 6 * (parent / 2) + (parent % 2 == 0 ? 2 : 3);
}

// ---------------------------------------------------------------------------
// Conformity

struct ConformityViolation {
    enum class Kind {
        HangingNode,  ///< a vertex of one element lies on the boundary of another without being shared
        Overlap,      ///< open interiors intersect
    };
    Kind kind;
    Index first;
    Index second;
    Point2 witness;  ///< offending vertex or edge crossing
};

struct ConformityReport {
    std::vector<ConformityViolation> violations;
    std::vector<std::pair<Index, Index>> duplicates;
    std::vector<Index> inverted;  ///< clockwise or degenerate elements
    double total_measure = 0.0;
    double domain_measure = 0.0;

    bool conformal() const { return violations.empty() && duplicates.empty() && inverted.empty(); }
    bool covers_domain(double tol = 1e-12) const {
        return std::abs(total_measure - domain_measure) <= tol * std::max(1.0, domain_measure);
    }
};

/// Pairwise check that any two elements meet in a shared full face or not at
/// all. Candidate pairs come from a bounding-box grid; vertex coincidence uses
/// the tolerance 1e-9 h.
inline ConformityReport check_conformity(const Mesh2& m, double domain_measure = 1.0) {
    ConformityReport rep;
    rep.domain_measure = domain_measure;
    if (m.empty()) return rep;
    const double tol = 1e-9 * mesh_h(m);

    std::map<std::array<Index, 3>, Index> seen;
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto t = m.simplex(e);
        const double sa = signed_measure(t);
        rep.total_measure += std::abs(sa);
        if (!(sa >= kDegeneracyFloor)) rep.inverted.push_back(static_cast<Index>(e));
        auto key = m.element(e);
        std::sort(key.begin(), key.end());
        auto [it, fresh] = seen.emplace(key, static_cast<Index>(e));
        if (!fresh) rep.duplicates.emplace_back(it->second, static_cast<Index>(e));
    }

    std::vector<Box2> boxes;
    boxes.reserve(m.element_count());
    for (std::size_t e = 0; e < m.element_count(); ++e) boxes.push_back(bounding_box(m.simplex(e).vertices, tol));

    auto shares = [](const Mesh2::Element& el, Index v) { return std::find(el.begin(), el.end(), v) != el.end(); };

    for_each_overlapping_pair(boxes, [&](std::size_t i, std::size_t j) {
        const auto& ei = m.element(i);
        const auto& ej = m.element(j);
        int common = 0;
        for (auto v : ei) common += shares(ej, v) ? 1 : 0;
        if (common == 3) return;  // already listed as a duplicate
        const auto ti = m.simplex(i);
        const auto tj = m.simplex(j);
        const auto I = static_cast<Index>(i), J = static_cast<Index>(j);

        auto vertices_against = [&](const Mesh2::Element& from, const Triangle& tf, const Mesh2::Element& other,
                                    const Triangle& to) {
            for (int k = 0; k < 3; ++k) {
                if (shares(other, from[k])) continue;
                if (!contains_closed(to, tf[k], tol)) continue;
                const auto kind = contains_open(to, tf[k], tol) ? ConformityViolation::Kind::Overlap
                                                                 : ConformityViolation::Kind::HangingNode;
                rep.violations.push_back({kind, I, J, tf[k]});
                return true;
            }
            return false;
        };
        if (vertices_against(ei, ti, ej, tj)) return;
        if (vertices_against(ej, tj, ei, ti)) return;

        // proper edge crossings
        for (int a = 0; a < 3; ++a) {
            const auto& p = ti[a];
            const auto& q = ti[(a + 1) % 3];
            for (int b = 0; b < 3; ++b) {
                const auto& r = tj[b];
                const auto& s = tj[(b + 1) % 3];
                const double lpq = distance(p, q), lrs = distance(r, s);
                const double dr = orient(p, q, r) / lpq, ds = orient(p, q, s) / lpq;
                const double dp = orient(r, s, p) / lrs, dq = orient(r, s, q) / lrs;
                const bool split1 = (dr > tol && ds < -tol) || (dr < -tol && ds > tol);
                const bool split2 = (dp > tol && dq < -tol) || (dp < -tol && dq > tol);
                if (split1 && split2) {
                    const double w = dp / (dp - dq);
                    rep.violations.push_back({ConformityViolation::Kind::Overlap, I, J, p + w * (q - p)});
                    return;
                }
            }
        }
    });
    return rep;
}

}  // namespace thinfem
