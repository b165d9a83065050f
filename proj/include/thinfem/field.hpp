#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "thinfem/geometry.hpp"

namespace thinfem {

/// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct SymMat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// A smooth exact solution: value, gradient and (optionally) Hessian.
struct ScalarField {
    std::string name;
    std::function<double(const Point2&)> value;
    std::function<Point2(const Point2&)> gradient;
    std::optional<std::function<SymMat2(const Point2&)>> hessian;

    double operator()(const Point2& p) const { return value(p); }
};

namespace fields {

/// a x + b y + c
inline ScalarField affine(double a, double b, double c) {
    return {"affine",
            [=](const Point2& p) { return a * p[0] + b * p[1] + c; },
            [=](const Point2&) { return Point2{{a, b}}; },
            [](const Point2&) { return SymMat2{}; }};
}

inline ScalarField constant(double c) { return affine(0.0, 0.0, c); }

/// x(1-x) y(1-y): vanishes on the boundary of the unit square.
inline ScalarField quartic_bubble() {
    return {"quartic",
            [](const Point2& p) { return p[0] * (1 - p[0]) * p[1] * (1 - p[1]); },
            [](const Point2& p) {
                const double x = p[0], y = p[1];
                return Point2{{(1 - 2 * x) * y * (1 - y), x * (1 - x) * (1 - 2 * y)}};
            },
            [](const Point2& p) {
                const double x = p[0], y = p[1];
                return SymMat2{-2 * y * (1 - y), (1 - 2 * x) * (1 - 2 * y), -2 * x * (1 - x)};
            }};
}

/// -Laplacian of quartic_bubble: 2(x(1-x) + y(1-y)).
inline ScalarField quartic_bubble_load() {
    return {"quartic-load",
            [](const Point2& p) { return 2 * (p[0] * (1 - p[0]) + p[1] * (1 - p[1])); },
            [](const Point2& p) { return Point2{{2 * (1 - 2 * p[0]), 2 * (1 - 2 * p[1])}}; },
            [](const Point2&) { return SymMat2{-4, 0, -4}; }};
}

/// c_xx x^2 + c_xy x y + c_yy y^2
inline ScalarField quadratic(double cxx, double cxy, double cyy) {
    return {"quadratic",
            [=](const Point2& p) { return cxx * p[0] * p[0] + cxy * p[0] * p[1] + cyy * p[1] * p[1]; },
            [=](const Point2& p) { return Point2{{2 * cxx * p[0] + cxy * p[1], cxy * p[0] + 2 * cyy * p[1]}}; },
            [=](const Point2&) { return SymMat2{2 * cxx, cxy, 2 * cyy}; }};
}

}  // namespace fields
}  // namespace thinfem
