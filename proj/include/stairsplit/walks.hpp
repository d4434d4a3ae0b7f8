#pragma once

// Brute-force combinatorics on substochastic chains: enumeration of all
// nonzero-probability walks up to a length bound, per-walk transition
// statistics, and the closed-form probability matrices of the two walk
// classes compared by the elementwise inequality
//   P_AGS^k <= P_GS^{k-n+1} (I-T)^{-1},  k >= n-1.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stairsplit/lu.hpp"
#include "stairsplit/matrix.hpp"

namespace stairsplit {

struct SubstochasticParts {
    Matrix T;  // I - A
    Matrix D;  // diagonal of T
    Matrix L;  // strictly lower part: downward transitions
    Matrix U;  // strictly upper part: upward transitions
};

namespace detail {

inline SubstochasticParts split_substochastic(Matrix T, double tol) {
    const std::size_t n = T.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (T(i, j) < -tol)
                throw std::invalid_argument("T is not substochastic: negative entry in row " +
                                            std::to_string(i + 1));
            row_sum += T(i, j);
        }
        if (row_sum > 1.0 + tol)
            throw std::invalid_argument("T is not substochastic: row " + std::to_string(i + 1) +
                                        " sums to " + std::to_string(row_sum));
    }
    SubstochasticParts p;
    p.D = part_extract(T, Part::Diag);
    p.L = part_extract(T, Part::StrictTril);
    p.U = part_extract(T, Part::StrictTriu);
    p.T = std::move(T);
    return p;
}

}  // namespace detail

// Splits A = I - T into T = D + L + U; T must be nonnegative with row sums
// at most 1 (within tol).
inline SubstochasticParts decompose_substochastic(const Matrix& A, double tol = 1e-12) {
    if (!A.is_square()) throw std::invalid_argument("decompose_substochastic: matrix not square");
    return detail::split_substochastic(Matrix::identity(A.rows()) - A, tol);
}

// A walk is a sequence of at least two visited states (one transition),
// 0-based.
struct Walk {
    std::vector<std::size_t> states;

    std::size_t transitions() const { return states.empty() ? 0 : states.size() - 1; }
};

struct WalkStats {
    std::size_t downward = 0;  // transitions i -> j with j < i
    std::size_t upward = 0;    // transitions i -> j with j > i
    // crossings of level h (1-based, h = 1..n-1): level_up[h-1] counts
    // transitions from {1..h} to {h+1..n}, level_down[h-1] the reverse
    std::vector<std::size_t> level_up;
    std::vector<std::size_t> level_down;
};

inline WalkStats walk_stats(const Walk& w, std::size_t n) {
    if (w.states.size() < 2) throw std::invalid_argument("walk_stats: walk has no transitions");
    WalkStats st;
    st.level_up.assign(n >= 1 ? n - 1 : 0, 0);
    st.level_down.assign(n >= 1 ? n - 1 : 0, 0);
    for (std::size_t k = 0; k + 1 < w.states.size(); ++k) {
        const std::size_t from = w.states[k], to = w.states[k + 1];
        if (from >= n || to >= n) throw std::invalid_argument("walk_stats: state out of range");
        if (to > from) {
            ++st.upward;
            for (std::size_t h = from; h < to; ++h) ++st.level_up[h];
        } else if (to < from) {
            ++st.downward;
            for (std::size_t h = to; h < from; ++h) ++st.level_down[h];
        }
    }
    return st;
}

// Visits every walk with nonzero probability and at most max_transitions
// transitions, together with its probability product. The Walk reference
// passed to the visitor is a reused buffer. Each visited walk counts one
// extension against the cap.
template <typename Visitor>
inline void enumerate_walks(const Matrix& T, std::size_t max_transitions, Visitor&& visit,
                            std::uint64_t cap = 10'000'000) {
    if (!T.is_square()) throw std::invalid_argument("enumerate_walks: matrix not square");
    const std::size_t n = T.rows();
    Walk walk;
    walk.states.reserve(max_transitions + 1);
    std::uint64_t visited = 0;

    auto extend = [&](auto&& self, double prob) -> void {
        if (walk.transitions() >= max_transitions) return;
        const std::size_t from = walk.states.back();
        for (std::size_t to = 0; to < n; ++to) {
            const double t = T(from, to);
            if (t == 0.0) continue;
            if (++visited > cap) throw std::runtime_error("enumeration too large");
            walk.states.push_back(to);
            const double p = prob * t;
            visit(static_cast<const Walk&>(walk), p);
            self(self, p);
            walk.states.pop_back();
        }
    };
    for (std::size_t start = 0; start < n; ++start) {
        walk.states.assign(1, start);
        extend(extend, 1.0);
    }
}

inline Matrix matrix_power(const Matrix& A, std::size_t k) {
    Matrix P = Matrix::identity(A.rows());
    for (std::size_t i = 0; i < k; ++i) P = P * A;
    return P;
}

// ((I-D-U)^{-1} L)^k: the probability matrix of walks with exactly k
// downward transitions that end with a downward transition.
inline Matrix ags_power_matrix(const Matrix& T, std::size_t k) {
    SubstochasticParts p = detail::split_substochastic(T, 1e-12);
    Matrix F = Matrix::identity(T.rows()) - p.D - p.U;
    LuFactors f = lu_factor(std::move(F));
    if (f.singular) throw std::runtime_error("ags_power_matrix: I - D - U is singular");
    return matrix_power(lu_solve(f, p.L), k);
}

// ((I-D-L)^{-1} U)^{k-n+1} (I-T)^{-1}: the probability matrix of walks with
// at least k-n+1 upward transitions; requires k >= n-1.
inline Matrix gs_bound_matrix(const Matrix& T, std::size_t k) {
    const std::size_t n = T.rows();
    if (k + 1 < n) throw std::invalid_argument("gs_bound_matrix: k must be at least n-1");
    SubstochasticParts p = detail::split_substochastic(T, 1e-12);
    Matrix F = Matrix::identity(n) - p.D - p.L;
    LuFactors f = lu_factor(std::move(F));
    if (f.singular) throw std::runtime_error("gs_bound_matrix: I - D - L is singular");
    const Matrix P_gs = lu_solve(f, p.U);
    LuFactors g = lu_factor(Matrix::identity(n) - p.T);
    if (g.singular) throw std::runtime_error("gs_bound_matrix: I - T is singular");
    return matrix_power(P_gs, k - (n - 1)) * lu_solve(g, Matrix::identity(n));
}

struct ComparisonReport {
    bool holds = true;
    double max_violation = 0.0;  // largest positive excess of the left side
    std::size_t worst_k = 0;
    std::size_t worst_i = 0;
    std::size_t worst_j = 0;
};

// Verifies P_AGS^k <= P_GS^{k-n+1} (I-T)^{-1} elementwise for
// k = n-1, ..., k_max.
inline ComparisonReport check_comparison_inequality(const Matrix& T, std::size_t k_max,
                                                    double tol = 1e-12) {
    const std::size_t n = T.rows();
    ComparisonReport rep;
    for (std::size_t k = n - 1; k <= k_max; ++k) {
        const Matrix lhs = ags_power_matrix(T, k);
        const Matrix rhs = gs_bound_matrix(T, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double excess = lhs(i, j) - rhs(i, j);
                if (excess > rep.max_violation) {
                    rep.max_violation = excess;
                    rep.worst_k = k;
                    rep.worst_i = i;
                    rep.worst_j = j;
                }
            }
    }
    rep.holds = rep.max_violation <= tol;
    return rep;
}

}  // namespace stairsplit
