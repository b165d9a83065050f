#pragma once

// Symmetric quadrature rules on the reference triangle. Points are given in
// barycentric coordinates and weights are normalized to sum to one, so
// integral over tau of f = |tau| * sum_q w_q f(x_q).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "thinfem/error.hpp"
#include "thinfem/geometry.hpp"

namespace thinfem {

struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }

    Point2 map(const Triangle& t, std::size_t q) const {
        const auto& l = points[q];
        return l[0] * t[0] + l[1] * t[1] + l[2] * t[2];
    }
};

namespace detail {

/// Gauss-Legendre nodes and weights on [0, 1].
inline void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);  // = (2 / ((1-z^2) P'^2)) / 2
    }
}

inline void add_orbit(QuadratureRule& r, const std::array<double, 3>& l, double w) {
    std::array<double, 3> p = l;
    std::sort(p.begin(), p.end());
    std::vector<std::array<double, 3>> orbit;
    do {
        orbit.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    for (const auto& q : orbit) {
        r.points.push_back(q);
        r.weights.push_back(w / static_cast<double>(orbit.size()));
    }
}

/// Collapsed Gauss product rule averaged over the six vertex permutations,
/// exact through total degree 2n - 2.
inline QuadratureRule symmetrized_collapsed_gauss(int degree) {
    const int n = (degree + 3) / 2;
    std::vector<double> x, w;
    gauss_legendre01(n, x, w);
    QuadratureRule r;
    r.degree = degree;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s = x[i];
            const double t = x[j] * (1.0 - s);
            const double weight = 2.0 * w[i] * w[j] * (1.0 - s);
            for (const auto& perm : std::array<std::array<int, 3>, 6>{
                     {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}}) {
                const std::array<double, 3> l{1.0 - s - t, s, t};
                r.points.push_back({l[perm[0]], l[perm[1]], l[perm[2]]});
                r.weights.push_back(weight / 6.0);
            }
        }
    }
    return r;
}

}  // namespace detail

/// Rule exact for all polynomials of total degree <= `degree`, 1 <= degree <= 10.
///   1      centroid
///   2      edge midpoints
///   3..5   7-point Radon rule (degree 5)
///   6      12-point Dunavant rule
///   7..10  collapsed Gauss product, symmetrized over vertex permutations
inline QuadratureRule quadrature_rule(int degree) {
    if (degree < 1 || degree > 10) {
        throw UnsupportedDegree("quadrature degree must be in 1..10, got " + std::to_string(degree));
    }
    QuadratureRule r;
    r.degree = degree;
    if (degree == 1) {
        detail::add_orbit(r, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0);
    } else if (degree == 2) {
        detail::add_orbit(r, {0.5, 0.5, 0.0}, 1.0);
    } else if (degree <= 5) {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0;
        detail::add_orbit(r, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 9.0 / 40.0);
        detail::add_orbit(r, {a1, a1, 1.0 - 2.0 * a1}, 3.0 * (155.0 - s15) / 1200.0);
        detail::add_orbit(r, {a2, a2, 1.0 - 2.0 * a2}, 3.0 * (155.0 + s15) / 1200.0);
    } else if (degree == 6) {
        constexpr double a1 = 0.249286745170910421136;
        constexpr double a2 = 0.063089014491502228340;
        constexpr double b1 = 0.053145049844816947353;
        constexpr double b2 = 0.310352451033784405416;
        detail::add_orbit(r, {a1, a1, 1.0 - 2.0 * a1}, 3.0 * 0.116786275726379366030);
        detail::add_orbit(r, {a2, a2, 1.0 - 2.0 * a2}, 3.0 * 0.050844906370206816921);
        detail::add_orbit(r, {b1, b2, 1.0 - b1 - b2}, 6.0 * 0.082851075618373575194);
    } else {
        r = detail::symmetrized_collapsed_gauss(degree);
    }
    return r;
}

}  // namespace thinfem
