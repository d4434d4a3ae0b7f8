#pragma once

// LU factorization with partial pivoting, the solve/inverse helpers built on
// it, and the M-matrix certificate search (which uses a solve as its last
// resort).

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stairsplit/matrix.hpp"

namespace stairsplit {

struct LuFactors {
    Matrix lu;                  // packed L (unit diagonal) and U
    std::vector<std::size_t> piv;
    bool singular = false;

    std::size_t dim() const { return lu.rows(); }
};

inline LuFactors lu_factor(Matrix A) {
    if (!A.is_square()) throw std::invalid_argument("lu_factor: matrix not square");
    const std::size_t n = A.rows();
    LuFactors f{std::move(A), std::vector<std::size_t>(n), false};
    Matrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                p = i;
            }
        f.piv[k] = p;
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        const double inv_pivot = 1.0 / m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = m(i, k) * inv_pivot;
            m(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

inline void lu_solve_in_place(const LuFactors& f, Vector& b) {
    if (f.singular) throw std::runtime_error("lu_solve: singular factorization");
    const std::size_t n = f.dim();
    if (b.size() != n) throw std::invalid_argument("lu_solve: shape mismatch");
    for (std::size_t k = 0; k < n; ++k)
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    for (std::size_t i = 1; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * b[j];
        b[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * b[j];
        b[ii] = s / f.lu(ii, ii);
    }
}

inline Vector lu_solve(const LuFactors& f, Vector b) {
    lu_solve_in_place(f, b);
    return b;
}

// Solve A X = B column by column.
inline Matrix lu_solve(const LuFactors& f, const Matrix& B) {
    const std::size_t n = f.dim();
    if (B.rows() != n) throw std::invalid_argument("lu_solve: shape mismatch");
    Matrix X(n, B.cols());
    Vector col(n);
    for (std::size_t j = 0; j < B.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = B(i, j);
        lu_solve_in_place(f, col);
        for (std::size_t i = 0; i < n; ++i) X(i, j) = col[i];
    }
    return X;
}

inline Matrix inverse(const Matrix& A) {
    LuFactors f = lu_factor(A);
    if (f.singular) throw std::runtime_error("inverse: matrix is singular");
    return lu_solve(f, Matrix::identity(A.rows()));
}

// Searches for an M-matrix certificate of a Z-matrix A: u > 0 with
// v = A u >= 0 and v != 0 certifies a (nonsingular) M-matrix. With u
// omitted, tries the ones vector, then a Perron-like vector, then the
// solution of A u = ones. Failure means "certificate not found", not
// "A is not an M-matrix".
inline std::optional<MMatrixCertificate> certify_m_matrix(
    const Matrix& A, const std::optional<Vector>& u = std::nullopt, double tol = 1e-12) {
    if (!A.is_square()) throw std::invalid_argument("certify_m_matrix: matrix not square");
    if (!is_z_matrix(A, tol)) throw std::invalid_argument("not a Z-matrix");
    const std::size_t n = A.rows();
    if (u) {
        if (u->size() != n) throw std::invalid_argument("certify_m_matrix: shape mismatch");
        return detail::try_certificate(A, *u, tol);
    }
    if (auto c = detail::try_certificate(A, Vector(n, 1.0), tol)) return c;
    if (auto c = detail::try_certificate(A, detail::perron_like_vector(A), tol)) return c;
    LuFactors f = lu_factor(A);
    if (!f.singular) {
        Vector w = lu_solve(f, Vector(n, 1.0));
        if (auto c = detail::try_certificate(A, w, tol)) return c;
    }
    return std::nullopt;
}

}  // namespace stairsplit
