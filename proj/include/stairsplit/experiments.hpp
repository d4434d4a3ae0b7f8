#pragma once

// The CSV-producing experiments behind the command-line driver: spectral
// radius comparison over random instances, the excess-eta sweep, and the
// overrelaxation sweep (which switches to convergence factors through the
// primed machinery when the input is a singular generator-form matrix).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <vector>

#include "stairsplit/generators.hpp"
#include "stairsplit/iteration.hpp"
#include "stairsplit/singular.hpp"
#include "stairsplit/spectrum.hpp"
#include "stairsplit/splitting.hpp"

namespace stairsplit {

struct CompareRow {
    std::size_t expnumber;
    double rho_gs;
    double rho_s;
    double rho_ags;
};

struct ExcessRow {
    double eta;
    double rho_gs;
    double rho_s;
    double rho_ags;
    double k_gs;
    double k_s;
    double k_ags;
};

struct SorRow {
    double omega;
    double rho_gsor;
    double rho_stsor;
    double rho_stsor2;
    double rho_agsor;
};

namespace detail {

inline double radius_of(const Splitting& s) { return spectral_radius(iteration_matrix(s)); }

inline void print_csv_value(std::ostream& os, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

}  // namespace detail

// One row per random lower Hessenberg instance, sorted by decreasing
// rho(P_GS).
inline std::vector<CompareRow> experiment_compare(std::size_t n, std::size_t trials,
                                                  std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("experiment_compare: need at least one trial");
    std::vector<CompareRow> rows;
    rows.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix A = random_hessenberg_m_matrix(n, seed + t).A;
        CompareRow r{};
        r.rho_gs = detail::radius_of(classic_splitting(A, SplitKind::GaussSeidel));
        r.rho_s = detail::radius_of(stair_splitting(A, StairOrder::First));
        r.rho_ags = detail::radius_of(classic_splitting(A, SplitKind::AntiGaussSeidel));
        rows.push_back(r);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const CompareRow& a, const CompareRow& b) { return a.rho_gs > b.rho_gs; });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].expnumber = i + 1;
    return rows;
}

// One row per excess value eta: the three radii and the power k needed to
// reach rho^k <= 0.01.
inline std::vector<ExcessRow> experiment_excess(std::size_t n, const std::vector<double>& etas,
                                                std::uint64_t seed) {
    std::vector<ExcessRow> rows;
    rows.reserve(etas.size());
    for (std::size_t t = 0; t < etas.size(); ++t) {
        const Matrix A = excess_m_matrix(n, etas[t], seed + t);
        ExcessRow r{};
        r.eta = etas[t];
        r.rho_gs = detail::radius_of(classic_splitting(A, SplitKind::GaussSeidel));
        r.rho_s = detail::radius_of(stair_splitting(A, StairOrder::First));
        r.rho_ags = detail::radius_of(classic_splitting(A, SplitKind::AntiGaussSeidel));
        r.k_gs = iterations_to_threshold(r.rho_gs);
        r.k_s = iterations_to_threshold(r.rho_s);
        r.k_ags = iterations_to_threshold(r.rho_ags);
        rows.push_back(r);
    }
    return rows;
}

// One row per overrelaxation value for the four SOR variants. Singular
// generator-form input (zero column sums) is detected automatically; its
// radii are the convergence factors gamma of the primed splittings.
inline std::vector<SorRow> experiment_sor_sweep(const Matrix& A,
                                                const std::optional<BlockPartition>& partition,
                                                const std::vector<double>& omegas) {
    const bool singular = has_zero_column_sums(A);
    auto radius = [&](SplitKind kind, double omega) {
        if (singular)
            return convergence_factor(iteration_matrix(primed_sor_splitting(A, kind, omega, partition)))
                .gamma;
        return spectral_radius(iteration_matrix(sor_splitting(A, kind, omega, partition)));
    };
    std::vector<SorRow> rows;
    rows.reserve(omegas.size());
    for (double omega : omegas) {
        SorRow r{};
        r.omega = omega;
        r.rho_gsor = radius(SplitKind::Gsor, omega);
        r.rho_stsor = radius(SplitKind::Stsor, omega);
        r.rho_stsor2 = radius(SplitKind::Stsor2, omega);
        r.rho_agsor = radius(SplitKind::Agsor, omega);
        rows.push_back(r);
    }
    return rows;
}

inline void write_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
    os << "expnumber,rhoGS,rhoS,rhoAGS\n";
    for (const auto& r : rows) {
        os << r.expnumber << ",";
        detail::print_csv_value(os, r.rho_gs);
        os << ",";
        detail::print_csv_value(os, r.rho_s);
        os << ",";
        detail::print_csv_value(os, r.rho_ags);
        os << "\n";
    }
}

inline void write_csv(std::ostream& os, const std::vector<ExcessRow>& rows) {
    os << "excess,rhoGS,rhoS,rhoAGS,logGS,logS,logAGS\n";
    for (const auto& r : rows) {
        const double cols[] = {r.eta, r.rho_gs, r.rho_s, r.rho_ags, r.k_gs, r.k_s, r.k_ags};
        for (std::size_t i = 0; i < 7; ++i) {
            if (i) os << ",";
            detail::print_csv_value(os, cols[i]);
        }
        os << "\n";
    }
}

inline void write_csv(std::ostream& os, const std::vector<SorRow>& rows) {
    os << "omega,rhoGSOR,rhoSTSOR,rhoSTSOR2,rhoAGSOR\n";
    for (const auto& r : rows) {
        const double cols[] = {r.omega, r.rho_gsor, r.rho_stsor, r.rho_stsor2, r.rho_agsor};
        for (std::size_t i = 0; i < 5; ++i) {
            if (i) os << ",";
            detail::print_csv_value(os, cols[i]);
        }
        os << "\n";
    }
}

inline std::vector<double> default_omega_grid() {
    std::vector<double> omegas;
    for (int i = 1; i <= 42; ++i) omegas.push_back(0.05 * i);  // 0.05 .. 2.10
    return omegas;
}

inline std::vector<double> default_eta_grid() {
    std::vector<double> etas;
    for (int i = 0; i < 50; ++i) {
        const double exponent = 1.0 - 7.0 * static_cast<double>(i) / 49.0;  // 10^1 .. 10^-6
        etas.push_back(std::pow(10.0, exponent));
    }
    return etas;
}

}  // namespace stairsplit
