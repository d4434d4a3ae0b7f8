#pragma once

// Randomized property suites runnable from tests and from the command line:
// the spectral-radius orderings of the splitting comparison theorems, the
// block-exchange eigenvalue identity, substitution splittings versus
// anti-Gauss-Seidel, the singular-system convergence-factor ordering, and
// the walk-counting oracles. Each suite reports its worst margin: the
// smallest slack observed over all checks, negative on a violation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stairsplit/generators.hpp"
#include "stairsplit/iteration.hpp"
#include "stairsplit/singular.hpp"
#include "stairsplit/spectrum.hpp"
#include "stairsplit/splitting.hpp"
#include "stairsplit/walks.hpp"

namespace stairsplit {

struct SuiteReport {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string detail;  // description of the worst case

    bool passed() const { return failures == 0; }

    void record(double margin, const std::string& what) {
        ++checks;
        if (margin < worst_margin) {
            worst_margin = margin;
            detail = what;
        }
        if (margin < 0.0) ++failures;
    }
};

namespace detail {

inline std::vector<std::complex<double>> sorted_by_real_imag(
    std::vector<std::complex<double>> eig) {
    std::sort(eig.begin(), eig.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return eig;
}

// Largest componentwise deviation between two sorted eigenvalue lists.
inline double multiset_deviation(const std::vector<std::complex<double>>& a,
                                 const std::vector<std::complex<double>>& b) {
    const auto sa = sorted_by_real_imag(a);
    const auto sb = sorted_by_real_imag(b);
    double dev = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        dev = std::max(dev, std::abs(sa[i].real() - sb[i].real()));
        dev = std::max(dev, std::abs(sa[i].imag() - sb[i].imag()));
    }
    return dev;
}

// Dense random M-matrix via strict diagonal dominance.
inline Matrix random_dominant_m_matrix(std::size_t k, UniformRng& rng) {
    Matrix A(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            A(i, j) = -rng.next();
            off += -A(i, j);
        }
        A(i, i) = off + 0.1 + rng.next();
    }
    return A;
}

inline Splitting random_regular_splitting(const Matrix& A, UniformRng& rng) {
    switch (rng.next_word() % 4) {
        case 0: return classic_splitting(A, SplitKind::Jacobi);
        case 1: return classic_splitting(A, SplitKind::GaussSeidel);
        case 2: return classic_splitting(A, SplitKind::AntiGaussSeidel);
        default: return stair_splitting(A, StairOrder::First);
    }
}

inline Matrix assemble_blocks(const Matrix& B11, const Matrix& B12, const Matrix& B21,
                              const Matrix& B22) {
    const std::size_t k = B11.rows(), l = B22.rows();
    Matrix A(k + l, k + l);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) A(i, j) = B11(i, j);
        for (std::size_t j = 0; j < l; ++j) A(i, k + j) = B12(i, j);
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < k; ++j) A(k + i, j) = B21(i, j);
        for (std::size_t j = 0; j < l; ++j) A(k + i, k + j) = B22(i, j);
    }
    return A;
}

inline std::vector<std::size_t> random_permutation(std::size_t m, UniformRng& rng) {
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t i = m; i-- > 1;)
        std::swap(perm[i], perm[rng.next_word() % (i + 1)]);
    return perm;
}

}  // namespace detail

// rho(P_J) >= rho(P_GS) >= rho(P_S1) >= rho(P_AGS) on random lower
// Hessenberg M-matrices (instance t uses seed + t and n in 3..12).
inline SuiteReport suite_theorems(std::uint64_t seed, std::size_t trials, double slack = 1e-10) {
    SuiteReport rep;
    rep.name = "theorems";
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 3 + t % 10;
        const Matrix A = random_hessenberg_m_matrix(n, seed + t).A;
        const double rho_j = spectral_radius(iteration_matrix(classic_splitting(A, SplitKind::Jacobi)));
        const double rho_gs =
            spectral_radius(iteration_matrix(classic_splitting(A, SplitKind::GaussSeidel)));
        const double rho_s =
            spectral_radius(iteration_matrix(stair_splitting(A, StairOrder::First)));
        const double rho_ags =
            spectral_radius(iteration_matrix(classic_splitting(A, SplitKind::AntiGaussSeidel)));
        std::ostringstream what;
        what << "seed " << seed + t << " n " << n;
        rep.record(rho_j - rho_gs + slack, "J vs GS, " + what.str());
        rep.record(rho_gs - rho_s + slack, "GS vs S, " + what.str());
        rep.record(rho_s - rho_ags + slack, "S vs AGS, " + what.str());
    }
    return rep;
}

// The block-exchange identity: swapping the roles of the off-diagonal
// blocks between M and N preserves the spectrum of M^{-1}N, and the
// exchanged splitting never has a larger radius than any block lower
// triangular competitor.
inline SuiteReport suite_exchange(std::uint64_t seed, std::size_t trials, double eig_tol = 1e-8,
                                  double rho_slack = 1e-10) {
    SuiteReport rep;
    rep.name = "exchange";
    for (std::size_t t = 0; t < trials; ++t) {
        UniformRng rng(seed + t);
        const std::size_t n = 4 + t % 7;
        const std::size_t k = 1 + rng.next_word() % (n - 1);
        const std::size_t l = n - k;

        // a genuine M-matrix A, partitioned 2x2; its principal submatrices
        // are M-matrices again
        const Matrix A = detail::random_dominant_m_matrix(n, rng);
        Matrix A11(k, k), A12(k, l), A21(l, k), A22(l, l);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i < k && j < k) A11(i, j) = A(i, j);
                if (i < k && j >= k) A12(i, j - k) = A(i, j);
                if (i >= k && j < k) A21(i - k, j) = A(i, j);
                if (i >= k && j >= k) A22(i - k, j - k) = A(i, j);
            }

        const Splitting s11 = detail::random_regular_splitting(A11, rng);
        const Splitting s22 = detail::random_regular_splitting(A22, rng);
        const Matrix zero_kl(k, l), zero_lk(l, k);

        // M = [M11, 0; A21, M22] pairs with N = [N11, -A12; 0, N22];
        // exchanging the off-diagonal blocks gives the hat splitting
        const Matrix M = detail::assemble_blocks(s11.M, zero_kl, A21, s22.M);
        const Matrix M_hat = detail::assemble_blocks(s11.M, A12, zero_lk, s22.M);

        const Splitting plain = custom_splitting(A, M);
        const Splitting exchanged = custom_splitting(A, M_hat);
        rep.record(plain.regular ? 1.0 : -1.0, "plain splitting not regular");
        rep.record(exchanged.regular ? 1.0 : -1.0, "exchanged splitting not regular");

        const auto eig_plain = eigenvalues(iteration_matrix(plain));
        const auto eig_hat = eigenvalues(iteration_matrix(exchanged));
        const double dev = detail::multiset_deviation(eig_plain, eig_hat);
        std::ostringstream what;
        what << "seed " << seed + t << " n " << n << " k " << k;
        rep.record(eig_tol - dev, "eigenvalue multisets, " + what.str());

        // block lower triangular competitor: move part of A21 into M
        Matrix M21(l, k);
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (rng.next_word() % 2 == 0) M21(i, j) = A21(i, j);
        const Matrix M_prime = detail::assemble_blocks(s11.M, zero_kl, M21, s22.M);
        const Splitting competitor = custom_splitting(A, M_prime);
        const double rho_hat = spectral_radius_of(eig_hat);
        const double rho_prime = spectral_radius(iteration_matrix(competitor));
        rep.record(rho_prime - rho_hat + rho_slack, "radius ordering, " + what.str());
    }
    return rep;
}

// Every substitution splitting of a lower Hessenberg M-matrix has a radius
// at least that of anti-Gauss-Seidel; substitution orders recovered from M
// rebuild the same zero pattern.
inline SuiteReport suite_substitution(std::uint64_t seed, std::size_t trials,
                                      std::size_t orders_per_instance = 20,
                                      double slack = 1e-10) {
    SuiteReport rep;
    rep.name = "substitution";
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 3 + t % 6;
        UniformRng rng((seed + t) * 2654435761u + 17);
        const Matrix A = random_hessenberg_m_matrix(n, seed + t).A;
        const double rho_ags =
            spectral_radius(iteration_matrix(classic_splitting(A, SplitKind::AntiGaussSeidel)));
        for (std::size_t r = 0; r < orders_per_instance; ++r) {
            SubstitutionOrder order{detail::random_permutation(n, rng)};
            const Splitting s = substitution_splitting(A, order);
            const double rho = spectral_radius(iteration_matrix(s));
            std::ostringstream what;
            what << "seed " << seed + t << " n " << n << " order " << r;
            rep.record(rho - rho_ags + slack, "substitution vs AGS, " + what.str());

            const auto recovered = find_substitution_order(s.M);
            bool same_pattern = recovered.has_value();
            if (recovered) {
                const Splitting rebuilt = substitution_splitting(A, *recovered);
                same_pattern = rebuilt.M == s.M;
            }
            rep.record(same_pattern ? 1.0 : -1.0, "order round-trip, " + what.str());
        }
    }
    return rep;
}

// gamma orderings for primed splittings of singular irreducible lower
// Hessenberg M-matrices, plus detection of the unit eigenvalue.
inline SuiteReport suite_singular(std::uint64_t seed, std::size_t trials, double slack = 1e-9) {
    SuiteReport rep;
    rep.name = "singular";
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 3 + t % 8;
        const Matrix A = random_singular_generator(n, seed + t);
        std::ostringstream what;
        what << "seed " << seed + t << " n " << n;

        const SplitKind kinds[] = {SplitKind::Jacobi, SplitKind::GaussSeidel, SplitKind::Stair1,
                                   SplitKind::AntiGaussSeidel};
        double gamma[4];
        for (int i = 0; i < 4; ++i) {
            const SpectrumReport sr = convergence_factor(iteration_matrix(primed_splitting(A, kinds[i])));
            gamma[i] = sr.gamma;
            rep.record(sr.one_eigenvalue_present ? 1.0 : -1.0,
                       "unit eigenvalue missing, " + what.str());
        }
        rep.record(gamma[0] - gamma[1] + slack, "J vs GS, " + what.str());
        rep.record(gamma[1] - gamma[2] + slack, "GS vs S, " + what.str());
        rep.record(gamma[2] - gamma[3] + slack, "S vs AGS, " + what.str());

        const auto cert = certify_m_matrix(l_transform(A).A_trunc);
        rep.record(cert ? 1.0 : -1.0, "truncated matrix certificate, " + what.str());
    }
    return rep;
}

namespace detail {

// Enumerated probability mass of the two walk classes, truncated at a
// length cap, against their closed forms; the truncation error is bounded
// by the geometric tail of ||T||_inf.
inline void check_walk_class_matrices(SuiteReport& rep, const Matrix& T, std::size_t cap,
                                      std::size_t k_max, std::uint64_t node_cap,
                                      const std::string& what) {
    const std::size_t n = T.rows();
    const double tnorm = T.inf_norm();
    if (tnorm >= 1.0) return;  // tail bound needs strict substochasticity
    const double tail = std::pow(tnorm, static_cast<double>(cap)) / (1.0 - tnorm);

    std::vector<Matrix> ags_class(k_max + 1, Matrix(n, n));
    std::vector<Matrix> gs_class(k_max + 1, Matrix(n, n));
    enumerate_walks(
        T, cap,
        [&](const Walk& w, double p) {
            std::size_t down = 0, up = 0;
            for (std::size_t i = 0; i + 1 < w.states.size(); ++i) {
                if (w.states[i + 1] < w.states[i]) ++down;
                if (w.states[i + 1] > w.states[i]) ++up;
            }
            const std::size_t from = w.states.front(), to = w.states.back();
            const bool ends_down = w.states[w.states.size() - 2] > to;
            if (ends_down && down <= k_max) ags_class[down](from, to) += p;
            for (std::size_t m = 0; m <= std::min(up, k_max); ++m) gs_class[m](from, to) += p;
        },
        node_cap);
    // the empty walk belongs to both zeroth classes (P_AGS^0 = I)
    for (std::size_t i = 0; i < n; ++i) {
        gs_class[0](i, i) += 1.0;
        ags_class[0](i, i) += 1.0;
    }

    for (std::size_t k = 0; k <= k_max; ++k) {
        const Matrix closed_ags = ags_power_matrix(T, k);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double gap = closed_ags(i, j) - ags_class[k](i, j);
                worst = std::min(worst, std::min(gap + 1e-12, tail + 1e-12 - gap));
            }
        rep.record(worst, "AGS walk class k=" + std::to_string(k) + ", " + what);

        const Matrix closed_gs = gs_bound_matrix(T, k + n - 1);
        worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double gap = closed_gs(i, j) - gs_class[k](i, j);
                worst = std::min(worst, std::min(gap + 1e-12, tail + 1e-12 - gap));
            }
        rep.record(worst, "GS walk class m=" + std::to_string(k) + ", " + what);
    }
}

}  // namespace detail

// Walk oracles on random substochastic lower Hessenberg chains: the
// downward/upward counting bound on every enumerated walk, the level
// crossing alternation, the elementwise comparison inequality, and the
// enumerated class probabilities against their closed forms.
inline SuiteReport suite_walks(std::uint64_t seed, std::size_t trials,
                               std::size_t enumeration_cap = 9,
                               std::size_t max_enum_instances = SIZE_MAX) {
    SuiteReport rep;
    rep.name = "walks";
    std::size_t enumerated = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = 2 + t % 5;
        const Matrix T = random_substochastic_hessenberg(n, seed + t);
        std::ostringstream what;
        what << "seed " << seed + t << " n " << n;

        const auto cmp = check_comparison_inequality(T, n - 1 + 5);
        rep.record(1e-12 - cmp.max_violation, "comparison inequality, " + what.str());

        if (n <= 4 && enumerated++ < max_enum_instances) {
            long long worst_lemma = std::numeric_limits<long long>::max();
            long long worst_alt = std::numeric_limits<long long>::max();
            enumerate_walks(T, enumeration_cap, [&](const Walk& w, double) {
                const WalkStats st = walk_stats(w, n);
                // downward <= upward + n - 1
                worst_lemma = std::min(
                    worst_lemma, static_cast<long long>(st.upward) +
                                     static_cast<long long>(n) - 1 -
                                     static_cast<long long>(st.downward));
                for (std::size_t h = 0; h + 1 < n; ++h) {
                    const long long diff = static_cast<long long>(st.level_up[h]) -
                                           static_cast<long long>(st.level_down[h]);
                    worst_alt = std::min(worst_alt, 1 - std::abs(diff));
                }
            });
            rep.record(static_cast<double>(worst_lemma), "walk counting bound, " + what.str());
            rep.record(static_cast<double>(worst_alt), "crossing alternation, " + what.str());
            detail::check_walk_class_matrices(rep, T, enumeration_cap, 4, 50'000'000, what.str());
        }
    }
    return rep;
}

inline std::vector<SuiteReport> run_suites(const std::string& which, std::uint64_t seed,
                                           std::size_t trials) {
    std::vector<SuiteReport> reports;
    const bool all = which == "all";
    if (all || which == "theorems") reports.push_back(suite_theorems(seed, trials));
    if (all || which == "exchange") reports.push_back(suite_exchange(seed, trials));
    if (all || which == "substitution") reports.push_back(suite_substitution(seed, trials));
    if (all || which == "singular") reports.push_back(suite_singular(seed, trials));
    if (all || which == "walks") reports.push_back(suite_walks(seed, trials));
    if (reports.empty()) throw std::invalid_argument("unknown suite '" + which + "'");
    return reports;
}

}  // namespace stairsplit
