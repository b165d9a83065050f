#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

#include "thinfem/error.hpp"

namespace thinfem {

/// Storage type of matrix entries and right-hand sides. Thin elements give
/// entries of order 1/alpha whose rows cancel to O(1); rounding them to double
/// already perturbs the discrete solution by about 1e-16 / alpha.
using StiffnessReal = long double;

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
struct CsrMatrix {
    std::size_t rows = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> cols;
    std::vector<StiffnessReal> vals;

    struct Triplet {
        std::uint32_t row;
        std::uint32_t col;
        StiffnessReal value;
    };

    /// Sums duplicates. Entries are merged in (row, col, insertion) order, so
    /// the result does not depend on anything but the triplet sequence.
    static CsrMatrix from_triplets(std::size_t n, std::vector<Triplet> t) {
        std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        CsrMatrix A;
        A.rows = n;
        A.row_ptr.assign(n + 1, 0);
        for (std::size_t i = 0; i < t.size();) {
            std::size_t j = i;
            StiffnessReal s = 0;
            while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col) s += t[j++].value;
            A.cols.push_back(t[i].col);
            A.vals.push_back(s);
            ++A.row_ptr[t[i].row + 1];
            i = j;
        }
        for (std::size_t r = 0; r < n; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
        return A;
    }

    std::size_t nonzeros() const { return vals.size(); }

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        y.resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            StiffnessReal s = 0;
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
            y[r] = static_cast<double>(s);
        }
    }

    StiffnessReal at(std::size_t r, std::size_t c) const {
        const auto b = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
        const auto e = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
        const auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(c));
        return (it != e && *it == c) ? vals[static_cast<std::size_t>(it - cols.begin())] : 0.0;
    }

    std::vector<StiffnessReal> diagonal() const {
        std::vector<StiffnessReal> d(rows, 0);
        for (std::size_t r = 0; r < rows; ++r) d[r] = at(r, r);
        return d;
    }
};

struct CgResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    double relative_residual = 0.0;  ///< true residual ||b - A x|| / ||b|| of the iterate
};

namespace detail {

#if defined(__SIZEOF_FLOAT128__)
using ResidualReal = __float128;
#else
using ResidualReal = long double;
#endif

}  // namespace detail

/// Jacobi-preconditioned conjugate gradients with iterative refinement.
/// Inner sweeps run in `long double`; the solution is accumulated and the
/// true residual b - A x recomputed in a wider type between sweeps. On
/// thin-element systems the stiffness entries grow like 1/alpha and both a
/// double and a long double iterate stall near a relative residual of 1e-12,
/// so the last digits come from refinement. Stops once the true residual is
/// at or below rel_tol; `iterations` counts inner CG steps over all sweeps.
inline CgResult conjugate_gradient(const CsrMatrix& A, const std::vector<StiffnessReal>& b, double rel_tol,
                                   std::size_t max_iter) {
    using Real = long double;
    using Wide = detail::ResidualReal;
    const std::size_t n = A.rows;
    CgResult res;
    res.x.assign(n, 0.0);

    auto dotr = [](const std::vector<Real>& u, const std::vector<Real>& v) {
        Real s = 0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return s;
    };
    auto apply = [&](const std::vector<Real>& x, std::vector<Real>& y) {
        for (std::size_t r = 0; r < n; ++r) {
            Real s = 0;
            for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) s += static_cast<Real>(A.vals[k]) * x[A.cols[k]];
            y[r] = s;
        }
    };

    Real bsq = 0;
    for (auto v : b) bsq += static_cast<Real>(v) * v;
    const Real bnorm = std::sqrt(bsq);
    if (bnorm == 0) return res;

    std::vector<Real> inv_diag(n);
    {
        const auto d = A.diagonal();
        for (std::size_t i = 0; i < n; ++i) {
            if (!(d[i] > 0)) throw NoConvergence(0, 1.0);
            inv_diag[i] = 1 / d[i];
        }
    }

    std::vector<Wide> x(n, 0);
    std::vector<Real> r(n), d(n), z(n), p(n), Ap(n);
    auto true_residual = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            Wide s = b[i];
            for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s -= static_cast<Wide>(A.vals[k]) * x[A.cols[k]];
            r[i] = static_cast<Real>(s);
        }
        return std::sqrt(dotr(r, r)) / bnorm;
    };

    std::size_t it = 0;
    Real rel = 1;
    Real previous = std::numeric_limits<Real>::infinity();
    while (true) {
        rel = true_residual();
        if (rel <= rel_tol) break;
        if (it >= max_iter || !(rel < previous)) throw NoConvergence(max_iter, static_cast<double>(rel));
        previous = rel;

        // Inner sweep on A d = r. The recursive residual keeps falling after
        // the true one stalls, so aim a little below the target.
        const Real rnorm = rel * bnorm;
        const Real target = std::max<Real>(Real(0.25) * rel_tol * bnorm, Real(1e-9) * rnorm);
        std::fill(d.begin(), d.end(), Real(0));
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        p = z;
        Real rz = dotr(r, z);
        while (std::sqrt(dotr(r, r)) > target) {
            if (it >= max_iter) break;
            apply(p, Ap);
            const Real pAp = dotr(p, Ap);
            if (!(pAp > 0)) throw NoConvergence(it, static_cast<double>(rel));
            const Real alpha = rz / pAp;
            for (std::size_t i = 0; i < n; ++i) {
                d[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
            for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            const Real rz_new = dotr(r, z);
            const Real beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
            ++it;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] += static_cast<Wide>(d[i]);
    }
    for (std::size_t i = 0; i < n; ++i) res.x[i] = static_cast<double>(x[i]);
    res.iterations = it;
    res.relative_residual = static_cast<double>(rel);
    return res;
}

inline CgResult conjugate_gradient(const CsrMatrix& A, const std::vector<double>& b, double rel_tol,
                                   std::size_t max_iter) {
    return conjugate_gradient(A, std::vector<StiffnessReal>(b.begin(), b.end()), rel_tol, max_iter);
}

}  // namespace thinfem
