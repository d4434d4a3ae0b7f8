#pragma once

// Reproducible instance generators: random lower Hessenberg M-matrices, the
// excess-eta family that approaches singularity, singular generator-form
// instances, and the block tridiagonal generator of the 2-queue overflow
// network.
//
// All random draws come from std::mt19937_64 with uniform doubles taken
// from the top 53 bits of each output word, so a (family, n, seed) tuple
// produces identical matrices on every platform. Draw order is part of the
// contract: the Hessenberg pattern row by row, then u, then v.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stairsplit/matrix.hpp"

namespace stairsplit {

class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1)
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_word() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct QueueParams {
    std::size_t n = 21;
    std::size_t s = 5;
    double lambda = 0.9;
    double mu = 0.1;
    double lambda1 = 1.0;
};

struct GeneratorSpec {
    enum class Family { RandomHessenberg, Excess, TwoQueue, File };

    Family family = Family::RandomHessenberg;
    std::size_t n = 5;
    std::uint64_t seed = 1;
    std::optional<double> eta;
    std::optional<QueueParams> queue;
    std::optional<std::string> path;

    std::string describe() const {
        std::ostringstream os;
        switch (family) {
            case Family::RandomHessenberg:
                os << "family=random_hessenberg n=" << n << " seed=" << seed;
                break;
            case Family::Excess:
                os << "family=excess n=" << n << " seed=" << seed;
                if (eta) os << " eta=" << *eta;
                break;
            case Family::TwoQueue: {
                const QueueParams q = queue.value_or(QueueParams{});
                os << "family=two_queue n=" << q.n << " s=" << q.s << " lambda=" << q.lambda
                   << " mu=" << q.mu << " lambda1=" << q.lambda1;
                break;
            }
            case Family::File:
                os << "family=file path=" << path.value_or("?");
                break;
        }
        return os.str();
    }
};

struct HessenbergInstance {
    Matrix A;
    Vector u;
    Vector v;
};

namespace detail {

// Nonnegative matrix on the strict-lower-plus-superdiagonal pattern, drawn
// row by row.
inline Matrix random_hessenberg_pattern(std::size_t n, UniformRng& rng) {
    Matrix P(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j < i || j == i + 1) P(i, j) = rng.next();
    return P;
}

inline Matrix assemble_from_pattern(const Matrix& P, const Vector& u, const Vector& v) {
    const std::size_t n = u.size();
    const Vector pu = P * u;
    Matrix A = P * -1.0;
    for (std::size_t i = 0; i < n; ++i) A(i, i) = (v[i] + pu[i]) / u[i];
    return A;
}

}  // namespace detail

// Random lower Hessenberg nonsingular M-matrix: A = diag((v + P u)./u) - P
// with P, u, v uniform on [0,1]; by construction A u = v with u > 0, v >= 0.
inline HessenbergInstance random_hessenberg_m_matrix(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_hessenberg_m_matrix: need n >= 2");
    UniformRng rng(seed);
    const Matrix P = detail::random_hessenberg_pattern(n, rng);
    HessenbergInstance inst;
    inst.u.resize(n);
    inst.v.resize(n);
    for (double& x : inst.u) x = rng.next();
    for (double& x : inst.v) x = rng.next();
    inst.A = detail::assemble_from_pattern(P, inst.u, inst.v);
    return inst;
}

// Same construction with u = ones and v = eta * ones; all row sums of A
// equal eta, so A approaches a singular matrix as eta -> 0.
inline Matrix excess_m_matrix(std::size_t n, double eta, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("excess_m_matrix: need n >= 2");
    if (!(eta > 0.0)) throw std::invalid_argument("excess_m_matrix: eta must be positive");
    UniformRng rng(seed);
    const Matrix P = detail::random_hessenberg_pattern(n, rng);
    return detail::assemble_from_pattern(P, Vector(n, 1.0), Vector(n, eta));
}

// Singular irreducible lower Hessenberg M-matrix A = I - T with T column
// stochastic: T is drawn on the lower Hessenberg pattern with sub- and
// superdiagonal bounded away from zero, then columns are rescaled to sum 1.
inline Matrix random_singular_generator(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_singular_generator: need n >= 2");
    UniformRng rng(seed);
    Matrix T(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j <= i + 1) {
                T(i, j) = rng.next();
                if (j + 1 == i || j == i + 1) T(i, j) += 0.05;
            }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += T(i, j);
        for (std::size_t i = 0; i < n; ++i) T(i, j) /= s;
    }
    return Matrix::identity(n) - T;
}

// Substochastic lower Hessenberg T for the walk oracles: uniform entries on
// the pattern, each row rescaled to a random total in [0.3, 0.95].
inline Matrix random_substochastic_hessenberg(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_substochastic_hessenberg: need n >= 2");
    UniformRng rng(seed);
    Matrix T(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j <= i + 1) T(i, j) = rng.next();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += T(i, j);
        if (s == 0.0) continue;
        const double target = 0.3 + 0.65 * rng.next();
        for (std::size_t j = 0; j < n; ++j) T(i, j) *= target / s;
    }
    return T;
}

struct TwoQueueGenerator {
    Matrix Q;
    BlockPartition partition;  // n blocks of size n
};

// Generator of the 2-queue overflow network:
//   Q = -(A (x) I + I (x) A + lambda1 diag(0,...,0,1) (x) R)
// with the n x n tridiagonal single-queue matrix A (arrival rate lambda,
// service rate mu, s servers) and the lower bidiagonal overflow coupling R.
// Q has zero column sums; -Q is a singular block tridiagonal M-matrix.
inline TwoQueueGenerator two_queue_generator(std::size_t n, std::size_t s, double lambda,
                                             double mu, double lambda1) {
    if (n < 2 || s < 1 || s > n)
        throw std::invalid_argument("two_queue_generator: need n >= 2 and 1 <= s <= n");
    if (!(lambda > 0.0) || !(mu > 0.0) || !(lambda1 > 0.0))
        throw std::invalid_argument("two_queue_generator: rates must be positive");

    Matrix A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double served = static_cast<double>(std::min(i, s));  // busy servers in state i
        A(i, i) = (i + 1 < n) ? lambda + served * mu
                              : static_cast<double>(std::min(n - 1, s)) * mu;
        if (i + 1 < n) A(i, i + 1) = -static_cast<double>(std::min(i + 1, s)) * mu;
        if (i > 0) A(i, i - 1) = -lambda;
    }

    Matrix R(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) R(i, i) = 1.0;
        if (i > 0) R(i, i - 1) = -1.0;
    }
    Matrix E(n, n);
    E(n - 1, n - 1) = 1.0;

    const Matrix I = Matrix::identity(n);
    Matrix Q = (kron(A, I) + kron(I, A) + kron(E, R) * lambda1) * -1.0;
    return TwoQueueGenerator{std::move(Q), BlockPartition::uniform(n, n)};
}

}  // namespace stairsplit
