#pragma once

// The stationary iteration x <- P x + M^{-1} b driven by a Splitting:
// forming the iteration matrix P = M^{-1} N, single sweeps (by substitution
// when the splitting carries an order, componentwise for the SOR variants),
// the two-phase staircase sweep, and the convergence loop.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stairsplit/lu.hpp"
#include "stairsplit/matrix.hpp"
#include "stairsplit/splitting.hpp"

namespace stairsplit {

struct IterationHistory {
    std::vector<double> residual_norms;  // max-norm of b - A x, initial first
    std::size_t iterations = 0;
    bool converged = false;
    bool diverged = false;
    Vector final_x;
};

namespace detail {

inline bool is_sor_kind(SplitKind k) {
    return k == SplitKind::Gsor || k == SplitKind::Agsor || k == SplitKind::Stsor ||
           k == SplitKind::Stsor2;
}

inline bool is_stair_patterned(SplitKind k) {
    return k == SplitKind::Stair1 || k == SplitKind::Stair2 || k == SplitKind::Stsor ||
           k == SplitKind::Stsor2;
}

// Group ranges of a splitting: scalar rows, or block rows under a partition.
struct Groups {
    std::vector<std::size_t> offset;
    std::vector<std::size_t> size;

    static Groups of(const Splitting& s) {
        Groups g;
        if (s.partition) {
            check_partition(s.A, *s.partition);
            const std::size_t m = s.partition->block_count();
            g.offset.resize(m);
            g.size = s.partition->sizes;
            std::size_t o = 0;
            for (std::size_t b = 0; b < m; ++b) {
                g.offset[b] = o;
                o += g.size[b];
            }
        } else {
            const std::size_t n = s.A.rows();
            g.offset.resize(n);
            g.size.assign(n, 1);
            for (std::size_t i = 0; i < n; ++i) g.offset[i] = i;
        }
        return g;
    }

    std::size_t count() const { return offset.size(); }
};

// Solves M x = r by substitution in the attached group order, reading the
// entries of M. Diagonal blocks are factored once at construction.
class OrderedSolver {
public:
    OrderedSolver(const Matrix& M, const Groups& groups, const std::vector<std::size_t>& order)
        : M_(M), groups_(groups), order_(order) {
        const std::size_t m = groups.count();
        std::vector<std::size_t> pos(m);
        for (std::size_t k = 0; k < m; ++k) pos[order[k]] = k;
        // the zero pattern of M must respect the order
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t c = 0; c < m; ++c)
                if (pos[c] > pos[g] && !group_block_zero(g, c))
                    throw std::invalid_argument("substitution order does not match M");
        scalar_ = true;
        for (std::size_t sz : groups.size)
            if (sz != 1) scalar_ = false;
        if (scalar_) {
            for (std::size_t i = 0; i < m; ++i)
                if (M(i, i) == 0.0) throw std::runtime_error("M singular");
        } else {
            factors_.reserve(m);
            for (std::size_t g = 0; g < m; ++g) {
                const std::size_t o = groups.offset[g], sz = groups.size[g];
                Matrix d(sz, sz);
                for (std::size_t i = 0; i < sz; ++i)
                    for (std::size_t j = 0; j < sz; ++j) d(i, j) = M(o + i, o + j);
                factors_.push_back(lu_factor(std::move(d)));
                if (factors_.back().singular) throw std::runtime_error("M singular");
            }
        }
    }

    // x_g <- M_gg^{-1} (r_g - sum_{c != g} M_gc x_c), over nonzero entries only
    void update_group(std::size_t g, const Vector& r, Vector& x) const {
        const std::size_t o = groups_.offset[g], sz = groups_.size[g];
        if (scalar_) {
            double sum = r[o];
            const std::size_t n = M_.rows();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == o) continue;
                const double mij = M_(o, j);
                if (mij != 0.0) sum -= mij * x[j];
            }
            x[o] = sum / M_(o, o);
            return;
        }
        Vector rhs(sz);
        const std::size_t n = M_.rows();
        for (std::size_t i = 0; i < sz; ++i) {
            double sum = r[o + i];
            for (std::size_t j = 0; j < n; ++j) {
                if (j >= o && j < o + sz) continue;
                const double mij = M_(o + i, j);
                if (mij != 0.0) sum -= mij * x[j];
            }
            rhs[i] = sum;
        }
        lu_solve_in_place(factors_[g], rhs);
        for (std::size_t i = 0; i < sz; ++i) x[o + i] = rhs[i];
    }

    void solve(const Vector& r, Vector& x) const {
        for (std::size_t g : order_) update_group(g, r, x);
    }

private:
    bool group_block_zero(std::size_t g, std::size_t c) const {
        for (std::size_t i = 0; i < groups_.size[g]; ++i)
            for (std::size_t j = 0; j < groups_.size[c]; ++j)
                if (M_(groups_.offset[g] + i, groups_.offset[c] + j) != 0.0) return false;
        return true;
    }

    const Matrix& M_;
    const Groups& groups_;
    const std::vector<std::size_t>& order_;
    bool scalar_;
    std::vector<LuFactors> factors_;
};

// Componentwise overrelaxed updates: new values are read from the columns
// the splitting keeps in M, old values elsewhere.
class SorSweeper {
public:
    SorSweeper(const Splitting& s, const Groups& groups)
        : s_(s), groups_(groups), omega_(s.omega.value_or(1.0)) {
        const std::size_t m = groups.count();
        scalar_ = true;
        for (std::size_t sz : groups.size)
            if (sz != 1) scalar_ = false;
        if (!scalar_) {
            factors_.reserve(m);
            for (std::size_t g = 0; g < m; ++g) {
                const std::size_t o = groups.offset[g], sz = groups.size[g];
                Matrix d(sz, sz);
                for (std::size_t i = 0; i < sz; ++i)
                    for (std::size_t j = 0; j < sz; ++j) d(i, j) = s.A(o + i, o + j);
                factors_.push_back(lu_factor(std::move(d)));
                if (factors_.back().singular) throw std::runtime_error("M singular");
            }
        } else {
            for (std::size_t g = 0; g < m; ++g)
                if (s.A(g, g) == 0.0) throw std::runtime_error("M singular");
        }
    }

    bool keeps(std::size_t g, std::size_t c) const {
        switch (s_.kind) {
            case SplitKind::Gsor: return c < g;
            case SplitKind::Agsor: return c > g;
            case SplitKind::Stsor:
            case SplitKind::Stsor2:
                return g % 2 == 1 && (c + 1 == g || c == g + 1);
            default: return false;
        }
    }

    void update_group(std::size_t g, const Vector& b, const Vector& x_old, Vector& x) const {
        const std::size_t o = groups_.offset[g], sz = groups_.size[g];
        const bool inner = s_.kind == SplitKind::Stsor2;
        Vector rhs(sz);
        for (std::size_t i = 0; i < sz; ++i) {
            double sum = b[o + i];
            for (std::size_t c = 0; c < groups_.count(); ++c) {
                if (c == g) continue;
                const std::size_t co = groups_.offset[c], csz = groups_.size[c];
                if (keeps(g, c)) {
                    if (inner) {
                        for (std::size_t j = 0; j < csz; ++j)
                            sum -= s_.A(o + i, co + j) *
                                   ((1.0 - omega_) * x_old[co + j] + omega_ * x[co + j]);
                    } else {
                        for (std::size_t j = 0; j < csz; ++j)
                            sum -= s_.A(o + i, co + j) * x[co + j];
                    }
                } else {
                    for (std::size_t j = 0; j < csz; ++j)
                        sum -= s_.A(o + i, co + j) * x_old[co + j];
                }
            }
            rhs[i] = sum;
        }
        if (scalar_) {
            const double z = rhs[0] / s_.A(o, o);
            x[o] = inner ? z : (1.0 - omega_) * x_old[o] + omega_ * z;
            return;
        }
        lu_solve_in_place(factors_[g], rhs);
        for (std::size_t i = 0; i < sz; ++i)
            x[o + i] = inner ? rhs[i] : (1.0 - omega_) * x_old[o + i] + omega_ * rhs[i];
    }

private:
    const Splitting& s_;
    const Groups& groups_;
    double omega_;
    bool scalar_;
    std::vector<LuFactors> factors_;
};

inline void check_vector_sizes(const Splitting& s, const Vector& x, const Vector& b) {
    if (x.size() != s.A.rows() || b.size() != s.A.rows())
        throw std::invalid_argument("sweep: vector size mismatch");
}

template <typename GroupVisitor>
inline Vector run_sweep(const Splitting& s, const Vector& x, const Vector& b,
                        GroupVisitor&& visit_groups) {
    check_vector_sizes(s, x, b);
    const Groups groups = Groups::of(s);
    Vector out = x;
    if (is_sor_kind(s.kind)) {
        SorSweeper sweeper(s, groups);
        visit_groups([&](std::size_t g) { sweeper.update_group(g, b, x, out); });
        return out;
    }
    Vector r = s.N * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    if (s.order) {
        OrderedSolver solver(s.M, groups, s.order->perm);
        visit_groups([&](std::size_t g) { solver.update_group(g, r, out); });
        return out;
    }
    LuFactors f = lu_factor(s.M);
    if (f.singular) throw std::runtime_error("M singular");
    lu_solve_in_place(f, r);
    return r;
}

}  // namespace detail

// P = M^{-1} N, by one factorization of M and n solves, or by substitution
// in the attached order.
inline Matrix iteration_matrix(const Splitting& s) {
    const std::size_t n = s.A.rows();
    if (s.order) {
        const detail::Groups groups = detail::Groups::of(s);
        detail::OrderedSolver solver(s.M, groups, s.order->perm);
        Matrix P(n, n);
        Vector col(n), x(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) col[i] = s.N(i, j);
            solver.solve(col, x);
            for (std::size_t i = 0; i < n; ++i) P(i, j) = x[i];
        }
        return P;
    }
    LuFactors f = lu_factor(s.M);
    if (f.singular) throw std::runtime_error("M singular");
    return lu_solve(f, s.N);
}

// One sweep: x' solves M x' = N x + b. With a substitution order the
// unknowns are computed in that order without forming P; the SOR kinds use
// the componentwise overrelaxed update formulas.
inline Vector sweep(const Splitting& s, const Vector& x, const Vector& b) {
    return detail::run_sweep(s, x, b, [&](auto&& update) {
        for (std::size_t g : s.order->perm) update(g);
    });
}

// The staircase sweep split into its two parallel phases: phase 1 updates
// the rows whose stair row is diagonal-only (they read only old values),
// phase 2 the remaining rows (they read phase-1 results). Each phase's
// updates are mutually independent; here they run in reverse order within
// the phase, which by that independence is componentwise identical to
// sweep().
inline Vector staircase_sweep_two_phase(const Splitting& s, const Vector& x, const Vector& b) {
    if (!detail::is_stair_patterned(s.kind) || !s.order)
        throw std::invalid_argument("kind mismatch: staircase sweep needs a stair splitting");
    const std::size_t m = s.order->perm.size();
    // cleared rows come first in the canonical order: the odd 1-based rows
    // ((m+1)/2 of them) except for the second-order stair, which clears the
    // even rows (m/2 of them)
    const std::size_t phase1 = (s.kind == SplitKind::Stair2) ? m / 2 : (m + 1) / 2;
    return detail::run_sweep(s, x, b, [&](auto&& update) {
        for (std::size_t k = phase1; k-- > 0;) update(s.order->perm[k]);
        for (std::size_t k = m; k-- > phase1;) update(s.order->perm[k]);
    });
}

// Iterates sweeps until the true residual b - A x drops below
// tol * (1 + max|b|), the sweep budget runs out, or divergence (residual
// beyond 1e12 times the initial one) is detected. Divergence is recorded in
// the history, not thrown.
inline IterationHistory solve_stationary(const Splitting& s, const Vector& b, const Vector& x0,
                                         double tol, std::size_t max_sweeps) {
    detail::check_vector_sizes(s, x0, b);
    IterationHistory h;
    Vector x = x0;
    const double target = tol * (1.0 + max_abs(b));

    auto residual_norm = [&](const Vector& xi) {
        Vector ax = s.A * xi;
        double worst = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i)
            worst = std::max(worst, std::abs(b[i] - ax[i]));
        return worst;
    };

    double res = residual_norm(x);
    h.residual_norms.push_back(res);
    const double initial = res;
    while (res > target && h.iterations < max_sweeps) {
        x = sweep(s, x, b);
        ++h.iterations;
        res = residual_norm(x);
        h.residual_norms.push_back(res);
        if (initial > 0.0 && res > 1e12 * initial) {
            h.diverged = true;
            break;
        }
    }
    h.converged = res <= target;
    h.final_x = std::move(x);
    return h;
}

}  // namespace stairsplit
