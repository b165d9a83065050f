#pragma once

// P1 finite elements for -Laplace(u) = f on a planar mesh with u = 0 at the
// marked boundary vertices.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "thinfem/error.hpp"
#include "thinfem/field.hpp"
#include "thinfem/interp.hpp"
#include "thinfem/mesh.hpp"
#include "thinfem/quadrature.hpp"
#include "thinfem/sparse.hpp"

namespace thinfem {

/// Local stiffness matrix of a P1 triangle: K_ij = (e_i . e_j) / (4 |t|),
/// with e_i the edge opposite vertex i. Exact; no quadrature involved.
template <typename Real = double>
std::array<std::array<Real, 3>, 3> local_stiffness(const Triangle& t) {
    require_nondegenerate(t);
    std::array<std::array<Real, 2>, 3> e{};
    for (int i = 0; i < 3; ++i) {
        for (int c = 0; c < 2; ++c) e[i][c] = Real(t[(i + 2) % 3][c]) - Real(t[(i + 1) % 3][c]);
    }
    const Real area = std::abs(e[2][0] * e[0][1] - e[2][1] * e[0][0]) / 2;
    std::array<std::array<Real, 3>, 3> K{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) K[i][j] = (e[i][0] * e[j][0] + e[i][1] * e[j][1]) / (4 * area);
    }
    return K;
}

/// Stiffness over all vertices, before any boundary elimination.
inline CsrMatrix assemble_full_stiffness(const Mesh2& m) {
    std::vector<CsrMatrix::Triplet> trip;
    trip.reserve(9 * m.element_count());
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto K = local_stiffness<StiffnessReal>(m.simplex(e));
        const auto& el = m.element(e);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) trip.push_back({el[i], el[j], K[i][j]});
        }
    }
    return CsrMatrix::from_triplets(m.vertex_count(), std::move(trip));
}

/// Stiffness matrix and load vector restricted to the free (non-boundary)
/// vertices.
struct SparseSystem {
    CsrMatrix matrix;
    std::vector<StiffnessReal> rhs;
    std::vector<Index> free_vertices;            ///< unknown -> vertex
    std::vector<std::int64_t> unknown_of_vertex; ///< vertex -> unknown, -1 on the boundary

    std::size_t unknowns() const { return free_vertices.size(); }
    std::size_t vertex_count() const { return unknown_of_vertex.size(); }
};

inline SparseSystem assemble(const Mesh2& m, const ScalarField& f, const QuadratureRule& q) {
    SparseSystem sys;
    sys.unknown_of_vertex.assign(m.vertex_count(), -1);
    for (Index v = 0; v < m.vertex_count(); ++v) {
        if (!m.is_boundary(v)) {
            sys.unknown_of_vertex[v] = static_cast<std::int64_t>(sys.free_vertices.size());
            sys.free_vertices.push_back(v);
        }
    }
    const std::size_t n = sys.free_vertices.size();
    sys.rhs.assign(n, 0);
    std::vector<CsrMatrix::Triplet> trip;
    trip.reserve(9 * m.element_count());
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto t = m.simplex(e);
        const auto K = local_stiffness<StiffnessReal>(t);
        const double area = measure(t);
        const auto& el = m.element(e);
        std::array<double, 3> load{};
        for (std::size_t qi = 0; qi < q.size(); ++qi) {
            const double fv = f(q.map(t, qi)) * q.weights[qi];
            for (int i = 0; i < 3; ++i) load[i] += fv * q.points[qi][i];
        }
        for (int i = 0; i < 3; ++i) {
            const auto ri = sys.unknown_of_vertex[el[i]];
            if (ri < 0) continue;
            sys.rhs[static_cast<std::size_t>(ri)] += area * load[i];
            for (int j = 0; j < 3; ++j) {
                const auto cj = sys.unknown_of_vertex[el[j]];
                if (cj < 0) continue;
                trip.push_back({static_cast<std::uint32_t>(ri), static_cast<std::uint32_t>(cj), K[i][j]});
            }
        }
    }
    sys.matrix = CsrMatrix::from_triplets(n, std::move(trip));
    return sys;
}

struct DiscreteSolution {
    NodalFunction u;                 ///< all vertices, exactly zero on the boundary
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

struct SolverOptions {
    double rel_tol = 1e-12;
    std::size_t max_iter = 0;  ///< 0: 10 * unknowns + 100
};

inline DiscreteSolution solve_cg(const SparseSystem& sys, const SolverOptions& opt = {}) {
    const std::size_t max_iter = opt.max_iter ? opt.max_iter : 10 * sys.unknowns() + 100;
    auto cg = conjugate_gradient(sys.matrix, sys.rhs, opt.rel_tol, max_iter);
    DiscreteSolution sol;
    sol.u.values.assign(sys.vertex_count(), 0.0);
    for (std::size_t i = 0; i < sys.unknowns(); ++i) sol.u.values[sys.free_vertices[i]] = cg.x[i];
    sol.iterations = cg.iterations;
    sol.relative_residual = cg.relative_residual;
    return sol;
}

/// -Laplace(u) = f with u = g at the marked boundary vertices. The boundary
/// values are moved to the right-hand side through the eliminated stiffness
/// columns; the free system is the same one `assemble` builds.
inline DiscreteSolution solve_dirichlet(const Mesh2& m, const ScalarField& f, const ScalarField& g,
                                        const QuadratureRule& q, const SolverOptions& opt = {}) {
    auto sys = assemble(m, f, q);
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const auto& el = m.element(e);
        bool touches = false;
        for (auto v : el) touches |= m.is_boundary(v);
        if (!touches) continue;
        const auto K = local_stiffness<StiffnessReal>(m.simplex(e));
        for (int i = 0; i < 3; ++i) {
            const auto ri = sys.unknown_of_vertex[el[i]];
            if (ri < 0) continue;
            for (int j = 0; j < 3; ++j) {
                if (m.is_boundary(el[j])) sys.rhs[static_cast<std::size_t>(ri)] -= K[i][j] * g(m.point(el[j]));
            }
        }
    }
    auto sol = solve_cg(sys, opt);
    for (auto b : m.boundary_vertices()) sol.u.values[b] = g(m.point(b));
    return sol;
}

/// e_h = |u - u_h|_{H1(Omega)}.
inline double fem_h1_error(const Mesh2& m, const ScalarField& u_exact, const DiscreteSolution& u_h,
                           const QuadratureRule& q) {
    return h1_seminorm_diff(m, u_exact, u_h.u, q);
}

// ---------------------------------------------------------------------------
// Convergence study on the six-triangle meshes with the quartic bubble
// solution.

struct ExperimentRow {
    int K = 0;
    double alpha = 0.0;
    double h = 0.0;
    double e_h = 0.0;
    double e_h_over_h = 0.0;
    std::size_t unknowns = 0;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

struct ExperimentOptions {
    int quadrature_degree = 6;
    SolverOptions solver;
    unsigned jobs = 1;
};

inline ExperimentRow run_cell(int K, double alpha, const ExperimentOptions& opt = {}) {
    const auto mesh = generate_square_six(K, alpha);
    const auto q = quadrature_rule(opt.quadrature_degree);
    const auto sys = assemble(mesh, fields::quartic_bubble_load(), q);
    const auto sol = solve_cg(sys, opt.solver);
    ExperimentRow row;
    row.K = K;
    row.alpha = alpha;
    row.h = mesh_h(mesh);
    row.e_h = fem_h1_error(mesh, fields::quartic_bubble(), sol, q);
    row.e_h_over_h = row.e_h / row.h;
    row.unknowns = sys.unknowns();
    row.iterations = sol.iterations;
    row.relative_residual = sol.relative_residual;
    return row;
}

/// One row per (K, alpha), K-major. Cells may run on `jobs` threads; each
/// cell is computed independently so results do not depend on `jobs`.
inline std::vector<ExperimentRow> run_experiment(const std::vector<int>& Ks, const std::vector<double>& alphas,
                                                 const ExperimentOptions& opt = {}) {
    if (Ks.empty() || alphas.empty()) throw InvalidParam("K and alpha lists must be nonempty");
    std::vector<std::pair<int, double>> cells;
    for (int K : Ks) {
        for (double a : alphas) cells.emplace_back(K, a);
    }
    std::vector<ExperimentRow> rows(cells.size());
    const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(cells.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = run_cell(cells[i].first, cells[i].second, opt);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < cells.size();) {
                if (failed) return;
                try {
                    rows[i] = run_cell(cells[i].first, cells[i].second, opt);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace thinfem
