#pragma once

// Construction of the matrix splittings A = M - N compared in this library:
// Jacobi, Gauss-Seidel, anti-Gauss-Seidel, the two stair splittings, general
// substitution-order splittings, and the four overrelaxed variants, in scalar
// and block form. Every constructor records whether the result is a regular
// splitting (M an M-matrix, N >= 0).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stairsplit/lu.hpp"
#include "stairsplit/matrix.hpp"

namespace stairsplit {

enum class SplitKind {
    Jacobi,
    GaussSeidel,
    AntiGaussSeidel,
    Stair1,
    Stair2,
    Substitution,
    Gsor,
    Agsor,
    Stsor,
    Stsor2,
    Custom,
};

inline const char* to_string(SplitKind k) {
    switch (k) {
        case SplitKind::Jacobi: return "jacobi";
        case SplitKind::GaussSeidel: return "gs";
        case SplitKind::AntiGaussSeidel: return "ags";
        case SplitKind::Stair1: return "stair1";
        case SplitKind::Stair2: return "stair2";
        case SplitKind::Substitution: return "substitution";
        case SplitKind::Gsor: return "gsor";
        case SplitKind::Agsor: return "agsor";
        case SplitKind::Stsor: return "stsor";
        case SplitKind::Stsor2: return "stsor2";
        case SplitKind::Custom: return "custom";
    }
    return "?";
}

enum class StairOrder { First = 1, Second = 2 };

// Order in which unknowns are eliminated when solving M x = b by
// substitution. Indexes scalar rows, or block rows when the owning
// splitting carries a partition.
struct SubstitutionOrder {
    std::vector<std::size_t> perm;

    bool is_permutation_of(std::size_t m) const {
        if (perm.size() != m) return false;
        std::vector<char> seen(m, 0);
        for (std::size_t p : perm) {
            if (p >= m || seen[p]) return false;
            seen[p] = 1;
        }
        return true;
    }
};

struct Splitting {
    Matrix A;
    Matrix M;
    Matrix N;
    SplitKind kind = SplitKind::Custom;
    std::optional<SubstitutionOrder> order;
    std::optional<double> omega;
    std::optional<BlockPartition> partition;
    bool regular = false;
};

struct RegularityCheck {
    bool regular = false;
    std::string detail;  // first violated condition and its location
};

// Checks N >= -tol elementwise, M a Z-matrix carrying an M-matrix
// certificate, and M - N - A negligible elementwise. Tolerances are scaled
// by the magnitude of the data so that file-loaded matrices pass.
inline RegularityCheck validate_regular(const Splitting& s, double tol = 1e-12) {
    const std::size_t n = s.A.rows();
    const double scale = std::max({1.0, s.A.max_abs(), s.M.max_abs()});
    const double eps = tol * scale;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (s.N(i, j) < -eps) {
                std::ostringstream os;
                os << "N(" << i << "," << j << ") = " << s.N(i, j) << " is negative";
                return {false, os.str()};
            }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && s.M(i, j) > eps) {
                std::ostringstream os;
                os << "M(" << i << "," << j << ") = " << s.M(i, j)
                   << " breaks the Z-matrix sign pattern";
                return {false, os.str()};
            }
    if (!certify_m_matrix(s.M, std::nullopt, eps))
        return {false, "no M-matrix certificate found for M"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double r = s.M(i, j) - s.N(i, j) - s.A(i, j);
            if (std::abs(r) > eps) {
                std::ostringstream os;
                os << "M - N - A = " << r << " at (" << i << "," << j << ")";
                return {false, os.str()};
            }
        }
    return {true, ""};
}

namespace detail {

inline void require_square(const Matrix& A, const char* who) {
    if (!A.is_square()) throw std::invalid_argument(std::string(who) + ": matrix not square");
}

inline std::size_t group_count(const Matrix& A,
                               const std::optional<BlockPartition>& partition) {
    if (!partition) return A.rows();
    check_partition(A, *partition);
    return partition->block_count();
}

inline void finish(Splitting& s) {
    s.N = s.M - s.A;
    s.regular = validate_regular(s).regular;
}

inline SubstitutionOrder identity_order(std::size_t m) {
    SubstitutionOrder o;
    o.perm.resize(m);
    for (std::size_t i = 0; i < m; ++i) o.perm[i] = i;
    return o;
}

inline SubstitutionOrder reverse_order(std::size_t m) {
    SubstitutionOrder o;
    o.perm.resize(m);
    for (std::size_t i = 0; i < m; ++i) o.perm[i] = m - 1 - i;
    return o;
}

// Rows whose off-diagonal stair entries were zeroed solve first: odd
// 1-based rows for the first-order stair, even rows for the second.
inline SubstitutionOrder stair_order(std::size_t m, StairOrder which) {
    SubstitutionOrder o;
    o.perm.reserve(m);
    const std::size_t first = (which == StairOrder::First) ? 0 : 1;
    for (std::size_t i = first; i < m; i += 2) o.perm.push_back(i);
    for (std::size_t i = 1 - first; i < m; i += 2) o.perm.push_back(i);
    return o;
}

inline void check_diagonal_invertible(const Matrix& A,
                                      const std::optional<BlockPartition>& partition) {
    if (!partition) {
        for (std::size_t i = 0; i < A.rows(); ++i)
            if (A(i, i) == 0.0) throw std::invalid_argument("diagonal not invertible");
        return;
    }
    for (std::size_t b = 0; b < partition->block_count(); ++b) {
        const std::size_t o = partition->offset(b);
        const std::size_t sz = partition->sizes[b];
        Matrix blockd(sz, sz);
        for (std::size_t i = 0; i < sz; ++i)
            for (std::size_t j = 0; j < sz; ++j) blockd(i, j) = A(o + i, o + j);
        if (lu_factor(std::move(blockd)).singular)
            throw std::invalid_argument("diagonal not invertible");
    }
}

}  // namespace detail

// The customary Jacobi, Gauss-Seidel and anti-Gauss-Seidel splittings
// (block versions under a partition).
inline Splitting classic_splitting(const Matrix& A, SplitKind kind,
                                   const std::optional<BlockPartition>& partition = std::nullopt) {
    detail::require_square(A, "classic_splitting");
    const std::size_t m = detail::group_count(A, partition);
    Splitting s;
    s.A = A;
    s.kind = kind;
    s.partition = partition;
    switch (kind) {
        case SplitKind::Jacobi:
            detail::check_diagonal_invertible(A, partition);
            s.M = part_extract(A, Part::Diag, partition);
            s.order = detail::identity_order(m);
            break;
        case SplitKind::GaussSeidel:
            s.M = part_extract(A, Part::Tril, partition);
            s.order = detail::identity_order(m);
            break;
        case SplitKind::AntiGaussSeidel:
            s.M = part_extract(A, Part::Triu, partition);
            s.order = detail::reverse_order(m);
            break;
        default:
            throw std::invalid_argument("classic_splitting: kind must be jacobi, gs or ags");
    }
    detail::finish(s);
    return s;
}

// Stair matrix: the tridiagonal part of A with the sub- and super-diagonal
// entries removed in every other row; first order clears the odd 1-based
// rows, second order the even ones. Out-of-range neighbours are skipped.
// Block form applies the rule to block rows of the block tridiagonal part.
inline Matrix stair_matrix(const Matrix& A, StairOrder which,
                           const std::optional<BlockPartition>& partition = std::nullopt) {
    detail::require_square(A, "stair_matrix");
    Matrix S = part_extract(A, Part::Tridiag, partition);
    const std::size_t n = A.rows();
    const std::size_t cleared = (which == StairOrder::First) ? 0 : 1;
    if (!partition) {
        for (std::size_t i = cleared; i < n; i += 2) {
            if (i > 0) S(i, i - 1) = 0.0;
            if (i + 1 < n) S(i, i + 1) = 0.0;
        }
        return S;
    }
    const auto blk = partition->index_to_block();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (blk[i] % 2 == cleared && blk[j] != blk[i]) S(i, j) = 0.0;
    return S;
}

inline Splitting stair_splitting(const Matrix& A, StairOrder which,
                                 const std::optional<BlockPartition>& partition = std::nullopt) {
    detail::require_square(A, "stair_splitting");
    const std::size_t m = detail::group_count(A, partition);
    Splitting s;
    s.A = A;
    s.M = stair_matrix(A, which, partition);
    s.kind = (which == StairOrder::First) ? SplitKind::Stair1 : SplitKind::Stair2;
    s.order = detail::stair_order(m, which);
    s.partition = partition;
    detail::finish(s);
    return s;
}

// Maximal-M splitting for a substitution order v: M keeps A_ij exactly when
// j does not come after i in v.
inline Splitting substitution_splitting(const Matrix& A, const SubstitutionOrder& order,
                                        const std::optional<BlockPartition>& partition = std::nullopt) {
    detail::require_square(A, "substitution_splitting");
    const std::size_t m = detail::group_count(A, partition);
    if (!order.is_permutation_of(m))
        throw std::invalid_argument("substitution_splitting: order is not a permutation");
    std::vector<std::size_t> pos(m);
    for (std::size_t k = 0; k < m; ++k) pos[order.perm[k]] = k;

    const std::size_t n = A.rows();
    const auto blk = partition ? partition->index_to_block() : std::vector<std::size_t>{};
    Splitting s;
    s.A = A;
    s.M = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t gi = partition ? blk[i] : i;
            const std::size_t gj = partition ? blk[j] : j;
            if (pos[gj] <= pos[gi]) s.M(i, j) = A(i, j);
        }
    s.kind = SplitKind::Substitution;
    s.order = order;
    s.partition = partition;
    detail::finish(s);
    return s;
}

// Finds a permutation v such that Pi M Pi^T is lower triangular, by
// repeatedly selecting a row whose remaining nonzeros all lie in already
// selected columns. Ties break towards the latest such row; with that rule
// the order recovered from a maximal substitution splitting of a full
// lower Hessenberg pattern is the one that built it, so rebuilding from it
// reproduces the zero pattern. Returns nothing when no order exists.
inline std::optional<SubstitutionOrder> find_substitution_order(const Matrix& M) {
    detail::require_square(M, "find_substitution_order");
    const std::size_t n = M.rows();
    std::vector<std::size_t> pending(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && M(i, j) != 0.0) ++pending[i];

    SubstitutionOrder order;
    order.perm.reserve(n);
    std::vector<char> selected(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        for (std::size_t i = n; i-- > 0;)
            if (!selected[i] && pending[i] == 0) {
                pick = i;
                break;
            }
        if (pick == n) return std::nullopt;
        selected[pick] = 1;
        order.perm.push_back(pick);
        for (std::size_t i = 0; i < n; ++i)
            if (!selected[i] && M(i, pick) != 0.0) --pending[i];
    }
    return order;
}

// Overrelaxed splittings: M_GSOR = D/w + L, M_AGSOR = D/w + U,
// M_STSOR = M_S + (1-w)/w D, M_STSOR2 = w M_S + (1-w) D, with D, L, U the
// (block) diagonal and strict triangular parts and M_S the first-order
// (block) stair matrix.
inline Splitting sor_splitting(const Matrix& A, SplitKind kind, double omega,
                               const std::optional<BlockPartition>& partition = std::nullopt) {
    detail::require_square(A, "sor_splitting");
    if (!(omega > 0.0)) throw std::invalid_argument("sor_splitting: omega must be positive");
    const std::size_t m = detail::group_count(A, partition);
    const Matrix D = part_extract(A, Part::Diag, partition);

    Splitting s;
    s.A = A;
    s.kind = kind;
    s.omega = omega;
    s.partition = partition;
    switch (kind) {
        case SplitKind::Gsor:
            s.M = D * (1.0 / omega) + part_extract(A, Part::StrictTril, partition);
            s.order = detail::identity_order(m);
            break;
        case SplitKind::Agsor:
            s.M = D * (1.0 / omega) + part_extract(A, Part::StrictTriu, partition);
            s.order = detail::reverse_order(m);
            break;
        case SplitKind::Stsor:
            s.M = stair_matrix(A, StairOrder::First, partition) + D * ((1.0 - omega) / omega);
            s.order = detail::stair_order(m, StairOrder::First);
            break;
        case SplitKind::Stsor2:
            s.M = stair_matrix(A, StairOrder::First, partition) * omega + D * (1.0 - omega);
            s.order = detail::stair_order(m, StairOrder::First);
            break;
        default:
            throw std::invalid_argument("sor_splitting: kind must be a SOR variant");
    }
    detail::finish(s);
    return s;
}

// Splitting with a caller-provided M; N = M - A.
inline Splitting custom_splitting(const Matrix& A, Matrix M,
                                  const std::optional<BlockPartition>& partition = std::nullopt,
                                  const std::optional<SubstitutionOrder>& order = std::nullopt) {
    detail::require_square(A, "custom_splitting");
    if (M.rows() != A.rows() || M.cols() != A.cols())
        throw std::invalid_argument("custom_splitting: shape mismatch");
    Splitting s;
    s.A = A;
    s.M = std::move(M);
    s.kind = SplitKind::Custom;
    s.order = order;
    s.partition = partition;
    detail::finish(s);
    return s;
}

}  // namespace stairsplit
