#pragma once

// Text mesh format:
//
//   simplex-mesh <dim>
//   vertices <n>
//   <x> <y> [<z>]          (n lines, 17 significant digits)
//   elements <m>
//   <i0> <i1> <i2> [<i3>]  (m lines, 0-based vertex ids)
//   boundary <b>
//   <i>                    (b lines)
//
// Blank lines and lines starting with '#' are ignored.

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "thinfem/mesh.hpp"
#include "thinfem/text_io.hpp"

namespace thinfem {

template <int Dim>
void write_mesh(const SimplexMesh<Dim>& m, std::ostream& out) {
    out << "simplex-mesh " << Dim << '\n';
    out << "vertices " << m.vertex_count() << '\n';
    for (const auto& p : m.points()) {
        for (int d = 0; d < Dim; ++d) out << (d ? " " : "") << text::format_exact(p[d]);
        out << '\n';
    }
    out << "elements " << m.element_count() << '\n';
    for (const auto& el : m.elements()) {
        for (int d = 0; d <= Dim; ++d) out << (d ? " " : "") << el[d];
        out << '\n';
    }
    out << "boundary " << m.boundary_vertices().size() << '\n';
    for (auto b : m.boundary_vertices()) out << b << '\n';
}

template <int Dim>
void write_mesh(const SimplexMesh<Dim>& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_mesh(m, out);
    if (!out) throw IoError("write to '" + path + "' failed");
}

/// Dimension declared in the header line of a mesh stream.
inline int peek_mesh_dim(std::istream& in) {
    text::LineReader r(in);
    auto t = r.expect_line("header");
    if (t.size() != 2 || t[0] != "simplex-mesh") r.fail("expected 'simplex-mesh <dim>'");
    const int dim = r.parse<int>(t[1], "dimension");
    if (dim != 2 && dim != 3) r.fail("dimension must be 2 or 3");
    return dim;
}

template <int Dim>
SimplexMesh<Dim> read_mesh(std::istream& in) {
    text::LineReader r(in);
    auto head = r.expect_line("header");
    if (head.size() != 2 || head[0] != "simplex-mesh") r.fail("expected 'simplex-mesh <dim>'");
    const int dim = r.parse<int>(head[1], "dimension");
    if (dim != Dim) {
        throw DimensionUnsupported("mesh file has dimension " + std::to_string(dim) + ", expected " +
                                   std::to_string(Dim));
    }

    const auto nv = r.expect_header("vertices");
    std::vector<Point<Dim>> pts(nv);
    for (auto& p : pts) {
        auto t = r.expect_line("vertex coordinates");
        if (t.size() != static_cast<std::size_t>(Dim)) r.fail("expected " + std::to_string(Dim) + " coordinates");
        for (int d = 0; d < Dim; ++d) {
            p[d] = r.parse<double>(t[d], "coordinate");
            if (!std::isfinite(p[d])) r.fail("non-finite coordinate");
        }
    }

    const auto ne = r.expect_header("elements");
    std::vector<typename SimplexMesh<Dim>::Element> els(ne);
    for (auto& el : els) {
        auto t = r.expect_line("element");
        if (t.size() != static_cast<std::size_t>(Dim + 1)) {
            r.fail("expected " + std::to_string(Dim + 1) + " vertex ids");
        }
        for (int d = 0; d <= Dim; ++d) {
            const auto v = r.parse<Index>(t[d], "vertex id");
            if (v >= nv) r.fail("vertex id " + std::to_string(v) + " out of range (" + std::to_string(nv) + " vertices)");
            for (int q = 0; q < d; ++q) {
                if (el[q] == v) r.fail("element repeats vertex " + std::to_string(v));
            }
            el[d] = v;
        }
    }

    const auto nb = r.expect_header("boundary");
    std::vector<Index> boundary(nb);
    for (auto& b : boundary) {
        auto t = r.expect_line("boundary vertex");
        if (t.size() != 1) r.fail("expected one boundary vertex id per line");
        b = r.parse<Index>(t[0], "vertex id");
        if (b >= nv) r.fail("boundary vertex " + std::to_string(b) + " out of range");
    }
    std::vector<std::string_view> extra;
    if (r.next(extra)) r.fail("trailing content after boundary block");
    if (els.empty()) throw EmptyMesh("mesh file declares no elements");
    return SimplexMesh<Dim>(std::move(pts), std::move(els), std::move(boundary));
}

template <int Dim>
SimplexMesh<Dim> read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_mesh<Dim>(in);
}

}  // namespace thinfem
