#pragma once

// Machinery for singular irreducible M-matrices with zero column sums
// (generator-form matrices from Markov chains): the L-transform that zeroes
// the last row, the primed splittings built from the truncated leading
// submatrix, and the steady-state iteration for A x = 0.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stairsplit/iteration.hpp"
#include "stairsplit/matrix.hpp"
#include "stairsplit/splitting.hpp"

namespace stairsplit {

struct LTransform {
    Matrix L;          // identity with e^T added to the last row
    Matrix L_inverse;
    Matrix B;          // L * A, last row exactly zero
    Matrix A_trunc;    // leading (n-1) x (n-1) principal submatrix of A
};

namespace detail {

inline double column_sum_defect(const Matrix& A) {
    double worst = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < A.rows(); ++i) s += A(i, j);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

}  // namespace detail

inline bool has_zero_column_sums(const Matrix& A, double tol = 1e-10) {
    return detail::column_sum_defect(A) <= tol * std::max(1.0, A.inf_norm());
}

// Scales A by 1/max(diag) so that T = I - A is nonnegative; requires zero
// column sums (e^T A = 0). The kernel and all iteration radii are invariant
// under this scaling.
inline Matrix normalize_to_generator(const Matrix& A, double tol = 1e-10) {
    if (!A.is_square()) throw std::invalid_argument("normalize_to_generator: matrix not square");
    if (!has_zero_column_sums(A, tol))
        throw std::invalid_argument("not a generator-form matrix");
    double dmax = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) dmax = std::max(dmax, A(i, i));
    if (!(dmax > 0.0)) throw std::invalid_argument("not a generator-form matrix");
    return dmax <= 1.0 ? A : A * (1.0 / dmax);
}

inline LTransform l_transform(const Matrix& A, double tol = 1e-10) {
    if (!A.is_square() || A.rows() < 2)
        throw std::invalid_argument("l_transform: need a square matrix of dimension >= 2");
    if (!has_zero_column_sums(A, tol))
        throw std::invalid_argument("l_transform: column sums are not zero");
    const std::size_t n = A.rows();
    LTransform t;
    t.L = Matrix::identity(n);
    t.L_inverse = Matrix::identity(n);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        t.L(n - 1, j) = 1.0;
        t.L_inverse(n - 1, j) = -1.0;
    }
    t.B = t.L * A;
    for (std::size_t j = 0; j < n; ++j) t.B(n - 1, j) = 0.0;  // exact by e^T A = 0
    t.A_trunc = Matrix(n - 1, n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) t.A_trunc(i, j) = A(i, j);
    return t;
}

namespace detail {

// Drop the last index from a partition of dim n to get one of dim n-1.
inline std::optional<BlockPartition> truncate_partition(
    const std::optional<BlockPartition>& partition) {
    if (!partition) return std::nullopt;
    std::vector<std::size_t> sizes = partition->sizes;
    if (sizes.empty()) throw std::invalid_argument("truncate_partition: empty partition");
    if (sizes.back() == 1)
        sizes.pop_back();
    else
        --sizes.back();
    return BlockPartition(sizes);
}

// M' = L^{-1} blockdiag(X, 1) = [X, 0; -colsums(X), 1], and the splitting
// (M', M' - A) of the original A. In scalar mode the substitution order of
// X extends to M' with the last index eliminated last; the dense last row
// of M' admits no block-level order, so block primed splittings solve by LU.
inline Splitting primed_from_part(const Matrix& A, Matrix X,
                                  const std::optional<SubstitutionOrder>& x_order,
                                  const std::optional<BlockPartition>& partition) {
    const std::size_t n = A.rows();
    Splitting s;
    s.A = A;
    s.M = Matrix(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) s.M(i, j) = X(i, j);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) colsum += X(i, j);
        s.M(n - 1, j) = -colsum;
    }
    s.M(n - 1, n - 1) = 1.0;
    s.kind = SplitKind::Custom;
    s.partition = partition;
    if (!partition && x_order) {
        SubstitutionOrder full;
        full.perm = x_order->perm;
        full.perm.push_back(n - 1);
        s.order = std::move(full);
    }
    detail::finish(s);
    return s;
}

}  // namespace detail

// Jacobi/GS/AGS/stair splitting of A built through the L-transform: the part
// is extracted from the truncated matrix and lifted back by L^{-1}.
inline Splitting primed_splitting(const Matrix& A, SplitKind kind,
                                  const std::optional<BlockPartition>& partition = std::nullopt,
                                  double tol = 1e-10) {
    LTransform t = l_transform(A, tol);
    const auto pt = detail::truncate_partition(partition);
    const std::size_t m = pt ? pt->block_count() : t.A_trunc.rows();
    Matrix X;
    std::optional<SubstitutionOrder> order;
    switch (kind) {
        case SplitKind::Jacobi:
            X = part_extract(t.A_trunc, Part::Diag, pt);
            order = detail::identity_order(m);
            break;
        case SplitKind::GaussSeidel:
            X = part_extract(t.A_trunc, Part::Tril, pt);
            order = detail::identity_order(m);
            break;
        case SplitKind::AntiGaussSeidel:
            X = part_extract(t.A_trunc, Part::Triu, pt);
            order = detail::reverse_order(m);
            break;
        case SplitKind::Stair1:
            X = stair_matrix(t.A_trunc, StairOrder::First, pt);
            order = detail::stair_order(m, StairOrder::First);
            break;
        case SplitKind::Stair2:
            X = stair_matrix(t.A_trunc, StairOrder::Second, pt);
            order = detail::stair_order(m, StairOrder::Second);
            break;
        default:
            throw std::invalid_argument("primed_splitting: unsupported kind");
    }
    return detail::primed_from_part(A, std::move(X), order, partition);
}

// Overrelaxed primed splitting: the SOR part is built on the truncated
// matrix, then lifted back by L^{-1} exactly as above.
inline Splitting primed_sor_splitting(const Matrix& A, SplitKind kind, double omega,
                                      const std::optional<BlockPartition>& partition = std::nullopt,
                                      double tol = 1e-10) {
    LTransform t = l_transform(A, tol);
    const auto pt = detail::truncate_partition(partition);
    Splitting inner = sor_splitting(t.A_trunc, kind, omega, pt);
    return detail::primed_from_part(A, std::move(inner.M), inner.order, partition);
}

struct SteadyStateResult {
    Vector x;
    IterationHistory history;
};

// Solves A x = 0 for the steady-state direction with the primed splitting
// of the requested kind, starting from the uniform vector and renormalizing
// to sum 1 each sweep. Non-convergence is flagged in the history.
inline SteadyStateResult steady_state(const Matrix& A, SplitKind kind, double tol = 1e-10,
                                      std::size_t max_sweeps = 100000,
                                      const std::optional<BlockPartition>& partition = std::nullopt) {
    Splitting s = primed_splitting(A, kind, partition);
    const std::size_t n = A.rows();
    const Vector b(n, 0.0);
    SteadyStateResult out;
    Vector x(n, 1.0 / static_cast<double>(n));
    auto renormalize = [&](Vector& v) {
        double sum = 0.0;
        for (double vi : v) sum += vi;
        if (sum != 0.0)
            for (double& vi : v) vi /= sum;
    };
    double res = max_abs(A * x);
    out.history.residual_norms.push_back(res);
    while (res > tol && out.history.iterations < max_sweeps) {
        x = sweep(s, x, b);
        renormalize(x);
        ++out.history.iterations;
        res = max_abs(A * x);
        out.history.residual_norms.push_back(res);
    }
    out.history.converged = res <= tol;
    out.history.final_x = x;
    out.x = std::move(x);
    return out;
}

}  // namespace stairsplit
