#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "stairsplit/generators.hpp"
#include "stairsplit/iteration.hpp"
#include "stairsplit/spectrum.hpp"
#include "stairsplit/splitting.hpp"
#include "stairsplit/verify.hpp"
#include "test_helpers.hpp"

using namespace stairsplit;
using stairsplit::testing::make_matrix;

namespace {

using cd = std::complex<double>;

// test-side complex Gaussian elimination, independent of the QR path
std::vector<cd> solve_complex(std::vector<std::vector<cd>> A, std::vector<cd> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cd f = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<cd> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        cd s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= A[ii][j] * x[j];
        x[ii] = s / A[ii][ii];
    }
    return x;
}

// upper bound certificate for sigma_min(A - lambda I) via inverse iteration
double eigen_residual(const Matrix& A, cd lambda) {
    const std::size_t n = A.rows();
    const double scale = std::max(1.0, A.max_abs());
    std::vector<std::vector<cd>> S(n, std::vector<cd>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) S[i][j] = cd(A(i, j), 0.0);
    const cd shift = lambda + cd(1e-13 * scale, 1e-13 * scale);
    for (std::size_t i = 0; i < n; ++i) S[i][i] -= shift;

    UniformRng rng(123);
    std::vector<cd> x(n);
    for (auto& v : x) v = cd(rng.next() - 0.5, rng.next() - 0.5);
    for (int iter = 0; iter < 2; ++iter) {
        x = solve_complex(S, x);
        double norm = 0.0;
        for (const auto& v : x) norm += std::norm(v);
        norm = std::sqrt(norm);
        for (auto& v : x) v /= norm;
    }
    // || (A - lambda I) x ||_2 with the exact shift
    std::vector<cd> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        cd s = -lambda * x[i];
        for (std::size_t j = 0; j < n; ++j) s += cd(A(i, j), 0.0) * x[j];
        r[i] = s;
    }
    double rn = 0.0;
    for (const auto& v : r) rn += std::norm(v);
    return std::sqrt(rn);
}

}  // namespace

TEST_CASE("eigenvalues of triangular matrices are the diagonal") {
    const Matrix A = make_matrix({{3, 1, 4}, {0, -2, 1}, {0, 0, 7}});
    auto eig = detail::sorted_by_real_imag(eigenvalues(A));
    CHECK(std::abs(eig[0] - cd(-2, 0)) < 1e-12);
    CHECK(std::abs(eig[1] - cd(3, 0)) < 1e-12);
    CHECK(std::abs(eig[2] - cd(7, 0)) < 1e-12);
}

TEST_CASE("eigenvalues of the swap matrix") {
    auto eig = detail::sorted_by_real_imag(eigenvalues(make_matrix({{0, 1}, {1, 0}})));
    CHECK(std::abs(eig[0] - cd(-1, 0)) < 1e-14);
    CHECK(std::abs(eig[1] - cd(1, 0)) < 1e-14);
}

TEST_CASE("companion matrix roots") {
    // x^3 - 2x^2 - x + 2 = (x - 1)(x + 1)(x - 2)
    const Matrix C = make_matrix({{0, 0, -2}, {1, 0, 1}, {0, 1, 2}});
    auto eig = detail::sorted_by_real_imag(eigenvalues(C));
    CHECK(std::abs(eig[0] - cd(-1, 0)) < 1e-10);
    CHECK(std::abs(eig[1] - cd(1, 0)) < 1e-10);
    CHECK(std::abs(eig[2] - cd(2, 0)) < 1e-10);
}

TEST_CASE("complex pairs come from rotations") {
    auto eig = detail::sorted_by_real_imag(eigenvalues(make_matrix({{0, -1}, {1, 0}})));
    CHECK(std::abs(eig[0] - cd(0, -1)) < 1e-14);
    CHECK(std::abs(eig[1] - cd(0, 1)) < 1e-14);
}

TEST_CASE("spectral radius basics") {
    CHECK(spectral_radius(Matrix(3, 3)) == 0.0);
    const Matrix A2 = make_matrix({{2, -1}, {-1, 2}});
    CHECK(spectral_radius(iteration_matrix(classic_splitting(A2, SplitKind::Jacobi))) ==
          Catch::Approx(0.5).margin(1e-12));
    CHECK(spectral_radius(iteration_matrix(classic_splitting(A2, SplitKind::GaussSeidel))) ==
          Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("the Perron bracket pins nonnegative spectral radii") {
    const auto bracket = detail::perron_root_bracket(make_matrix({{0, 0.5}, {0.5, 0}}));
    CHECK(bracket.tight);
    CHECK(bracket.lo <= 0.5 + 1e-12);
    CHECK(bracket.hi >= 0.5 - 1e-12);
    CHECK(bracket.hi - bracket.lo < 1e-8);
}

TEST_CASE("convergence factor excludes the unit eigenvalue") {
    const SpectrumReport id2 = convergence_factor(Matrix::identity(2));
    CHECK(id2.gamma == 0.0);
    CHECK(id2.one_eigenvalue_present);

    // the singular-system example: P' = [[0,1],[0,1]] has spectrum {0, 1}
    const SpectrumReport p = convergence_factor(make_matrix({{0, 1}, {0, 1}}));
    CHECK(p.gamma <= 1e-8);
    CHECK(p.one_eigenvalue_present);

    const SpectrumReport d = convergence_factor(make_matrix({{1, 0, 0}, {0, 0.9, 0}, {0, 0, -0.3}}));
    CHECK(d.gamma == Catch::Approx(0.9).margin(1e-12));
    CHECK(d.one_eigenvalue_present);
    CHECK(d.rho == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("iterations to threshold") {
    CHECK(iterations_to_threshold(0.1, 0.01) == Catch::Approx(2.0));
    CHECK(iterations_to_threshold(0.01) == Catch::Approx(1.0));
    CHECK(std::isinf(iterations_to_threshold(1.0)));
    CHECK(std::isinf(iterations_to_threshold(1.3)));
    CHECK(iterations_to_threshold(0.0) == 0.0);
    CHECK_THROWS_AS(iterations_to_threshold(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(iterations_to_threshold(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("nonfinite input is rejected") {
    Matrix A(2, 2);
    A(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigenvalues(A), std::invalid_argument);
}

TEST_CASE("computed eigenvalues leave A - lambda I nearly singular") {
    for (std::size_t n : {10u, 40u, 100u}) {
        UniformRng rng(n);
        Matrix A(n, n);
        for (auto& x : A.data()) x = 2.0 * rng.next() - 1.0;
        const double scale = A.max_abs();
        for (const cd& lambda : eigenvalues(A))
            CHECK(eigen_residual(A, lambda) <= 1e-8 * scale * n);
    }
}

TEST_CASE("eigenvalues are invariant under symmetric permutation") {
    UniformRng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng.next_word() % 10;
        Matrix A(n, n);
        for (auto& x : A.data()) x = 2.0 * rng.next() - 1.0;

        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.next_word() % (i + 1)]);
        Matrix B(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) B(i, j) = A(perm[i], perm[j]);

        CHECK(detail::multiset_deviation(eigenvalues(A), eigenvalues(B)) < 1e-8);
    }
}

TEST_CASE("block-exchange eigenvalue identity and radius ordering") {
    const SuiteReport rep = suite_exchange(3, 60);
    INFO(rep.detail);
    CHECK(rep.failures == 0);
    CHECK(rep.worst_margin >= 0.0);
}
