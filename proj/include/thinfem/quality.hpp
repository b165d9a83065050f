#pragma once

// Good / ordinary / bad classification of mesh elements relative to theta.
//
//   n = 2:  bad  iff theta_max > pi - 2 theta   (outside K_theta)
//           good iff theta_min >= theta
//   n = 3:  bad  iff theta_min < theta, good otherwise
//
// The K_theta condition is closed, so theta_max == pi - 2 theta is not bad.

#include <array>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

#include "thinfem/geometry.hpp"
#include "thinfem/mesh.hpp"

namespace thinfem {

enum class ElementClass { Good, Ordinary, Bad };

inline std::string_view to_string(ElementClass c) {
    switch (c) {
        case ElementClass::Good: return "good";
        case ElementClass::Ordinary: return "ordinary";
        case ElementClass::Bad: return "bad";
    }
    return "?";
}

inline void require_quality_angle(double theta, const char* name = "theta") {
    if (!(theta > 0.0 && theta <= std::numbers::pi / 3)) {
        throw InvalidParam(std::string(name) + " must lie in (0, pi/3]");
    }
}

template <int Dim>
ElementClass classify_angles(const AngleExtremes& a, double theta) {
    if constexpr (Dim == 2) {
        if (a.max > std::numbers::pi - 2.0 * theta) return ElementClass::Bad;
        return a.min >= theta ? ElementClass::Good : ElementClass::Ordinary;
    } else {
        return a.min < theta ? ElementClass::Bad : ElementClass::Good;
    }
}

template <int Dim>
ElementClass classify_element(const Simplex<Dim>& s, double theta) {
    return classify_angles<Dim>(simplex_angles(s), theta);
}

struct ClassificationReport {
    double theta = 0.0;
    std::vector<ElementClass> classes;
    std::size_t good = 0;
    std::size_t ordinary = 0;
    std::size_t bad = 0;
    double worst_min_angle = 0.0;
    double worst_max_angle = 0.0;
    std::size_t worst_min_element = 0;
    std::size_t worst_max_element = 0;

    std::size_t count(ElementClass c) const {
        return c == ElementClass::Good ? good : c == ElementClass::Ordinary ? ordinary : bad;
    }
    std::vector<std::size_t> elements_of(ElementClass c) const {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < classes.size(); ++e) {
            if (classes[e] == c) out.push_back(e);
        }
        return out;
    }
};

template <int Dim>
ClassificationReport classify(const SimplexMesh<Dim>& m, double theta) {
    require_quality_angle(theta);
    ClassificationReport rep;
    rep.theta = theta;
    rep.classes.reserve(m.element_count());
    rep.worst_min_angle = std::numbers::pi;
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto a = simplex_angles(m.simplex(e));
        const auto c = classify_angles<Dim>(a, theta);
        rep.classes.push_back(c);
        (c == ElementClass::Good ? rep.good : c == ElementClass::Ordinary ? rep.ordinary : rep.bad)++;
        if (a.min < rep.worst_min_angle) {
            rep.worst_min_angle = a.min;
            rep.worst_min_element = e;
        }
        if (a.max > rep.worst_max_angle) {
            rep.worst_max_angle = a.max;
            rep.worst_max_element = e;
        }
    }
    return rep;
}

}  // namespace thinfem
