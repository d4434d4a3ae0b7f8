#include <catch2/catch_amalgamated.hpp>

#include "stairsplit/generators.hpp"
#include "stairsplit/iteration.hpp"
#include "stairsplit/singular.hpp"
#include "stairsplit/splitting.hpp"
#include "test_helpers.hpp"

using namespace stairsplit;
using stairsplit::testing::make_matrix;
using stairsplit::testing::max_abs_diff;

namespace {
const Matrix A2 = make_matrix({{2, -1}, {-1, 2}});

Vector matrix_form_sweep(const Splitting& s, const Vector& x, const Vector& b) {
    Vector r = s.N * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return lu_solve(lu_factor(s.M), r);
}
}  // namespace

TEST_CASE("iteration matrices of the 2x2 example") {
    const Matrix P_gs = iteration_matrix(classic_splitting(A2, SplitKind::GaussSeidel));
    CHECK(max_abs_diff(P_gs, make_matrix({{0, 0.5}, {0, 0.25}})) < 1e-15);

    const Matrix P_j = iteration_matrix(classic_splitting(A2, SplitKind::Jacobi));
    CHECK(max_abs_diff(P_j, make_matrix({{0, 0.5}, {0.5, 0}})) < 1e-15);

    // N = 0 gives P = 0
    const Matrix P_id = iteration_matrix(custom_splitting(A2, A2));
    CHECK(P_id.max_abs() == 0.0);
}

TEST_CASE("singular M is reported") {
    const Splitting bad = custom_splitting(A2, make_matrix({{1, 1}, {1, 1}}));
    CHECK_THROWS_WITH(iteration_matrix(bad), "M singular");
    CHECK_THROWS_WITH(sweep(bad, Vector{0, 0}, Vector{1, 1}), "M singular");
}

TEST_CASE("sweep on the 2x2 example by forward substitution") {
    const Splitting gs = classic_splitting(A2, SplitKind::GaussSeidel);
    const Vector next = sweep(gs, Vector{0, 0}, Vector{1, 1});
    CHECK(next[0] == 0.5);
    CHECK(next[1] == 0.75);
}

TEST_CASE("sweep with N = 0 ignores the current iterate") {
    const Splitting s = custom_splitting(A2, A2);
    const Vector b{1.0, 2.0};
    const Vector from_zero = sweep(s, Vector{0, 0}, b);
    const Vector from_junk = sweep(s, Vector{17, -9}, b);
    CHECK(max_abs_diff(from_zero, from_junk) == 0.0);
    Vector residual = A2 * from_zero;
    for (std::size_t i = 0; i < 2; ++i) residual[i] -= b[i];
    CHECK(max_abs(residual) < 1e-14);
}

TEST_CASE("the exact solution is a fixed point of every sweep") {
    const Matrix A = random_hessenberg_m_matrix(7, 42).A;
    Vector b(7);
    UniformRng rng(5);
    for (auto& x : b) x = rng.next();
    const Vector exact = lu_solve(lu_factor(A), b);

    std::vector<Splitting> all;
    all.push_back(classic_splitting(A, SplitKind::Jacobi));
    all.push_back(classic_splitting(A, SplitKind::GaussSeidel));
    all.push_back(classic_splitting(A, SplitKind::AntiGaussSeidel));
    all.push_back(stair_splitting(A, StairOrder::First));
    all.push_back(stair_splitting(A, StairOrder::Second));
    all.push_back(sor_splitting(A, SplitKind::Gsor, 0.8));
    all.push_back(sor_splitting(A, SplitKind::Agsor, 1.2));
    all.push_back(sor_splitting(A, SplitKind::Stsor, 0.9));
    all.push_back(sor_splitting(A, SplitKind::Stsor2, 1.1));
    for (const Splitting& s : all) {
        const Vector swept = sweep(s, exact, b);
        CHECK(max_abs_diff(swept, exact) < 1e-10 * max_abs(exact));
    }
}

TEST_CASE("sweeps agree with the matrix form M x' = N x + b") {
    UniformRng rng(9);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Matrix A = random_hessenberg_m_matrix(6, seed).A;
        Vector x(6), b(6);
        for (auto& v : x) v = 2.0 * rng.next() - 1.0;
        for (auto& v : b) v = 2.0 * rng.next() - 1.0;

        std::vector<Splitting> all;
        all.push_back(classic_splitting(A, SplitKind::Jacobi));
        all.push_back(classic_splitting(A, SplitKind::GaussSeidel));
        all.push_back(classic_splitting(A, SplitKind::AntiGaussSeidel));
        all.push_back(stair_splitting(A, StairOrder::First));
        all.push_back(sor_splitting(A, SplitKind::Gsor, 1.4));
        all.push_back(sor_splitting(A, SplitKind::Agsor, 0.6));
        all.push_back(sor_splitting(A, SplitKind::Stsor, 1.3));
        all.push_back(sor_splitting(A, SplitKind::Stsor2, 0.7));
        for (const Splitting& s : all) {
            const Vector via_sweep = sweep(s, x, b);
            const Vector via_matrix = matrix_form_sweep(s, x, b);
            const double scale = std::max(1.0, max_abs(via_matrix));
            CHECK(max_abs_diff(via_sweep, via_matrix) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("block sweeps agree with the matrix form") {
    const TwoQueueGenerator gen = two_queue_generator(5, 2, 0.9, 0.1, 1.0);
    const LTransform t = l_transform(gen.Q * -1.0);
    const BlockPartition partition({5, 5, 5, 5, 4});
    UniformRng rng(3);
    Vector x(24), b(24);
    for (auto& v : x) v = rng.next();
    for (auto& v : b) v = rng.next();

    std::vector<Splitting> all;
    all.push_back(classic_splitting(t.A_trunc, SplitKind::Jacobi, partition));
    all.push_back(classic_splitting(t.A_trunc, SplitKind::GaussSeidel, partition));
    all.push_back(stair_splitting(t.A_trunc, StairOrder::First, partition));
    all.push_back(sor_splitting(t.A_trunc, SplitKind::Gsor, 1.2, partition));
    all.push_back(sor_splitting(t.A_trunc, SplitKind::Stsor, 0.8, partition));
    all.push_back(sor_splitting(t.A_trunc, SplitKind::Stsor2, 1.5, partition));
    for (const Splitting& s : all) {
        const Vector via_sweep = sweep(s, x, b);
        const Vector via_matrix = matrix_form_sweep(s, x, b);
        const double scale = std::max(1.0, max_abs(via_matrix));
        CHECK(max_abs_diff(via_sweep, via_matrix) <= 1e-12 * scale);
    }
}

TEST_CASE("two-phase staircase sweep is componentwise identical") {
    UniformRng rng(77);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t n = 3 + seed % 6;
        const Matrix A = random_hessenberg_m_matrix(n, seed).A;
        Vector x(n), b(n);
        for (auto& v : x) v = rng.next();
        for (auto& v : b) v = rng.next();
        for (StairOrder which : {StairOrder::First, StairOrder::Second}) {
            const Splitting s = stair_splitting(A, which);
            CHECK(sweep(s, x, b) == staircase_sweep_two_phase(s, x, b));
        }
        const Splitting st2 = sor_splitting(A, SplitKind::Stsor2, 1.3);
        CHECK(sweep(st2, x, b) == staircase_sweep_two_phase(st2, x, b));
    }
}

TEST_CASE("two-phase staircase sweep on the pinned block tridiagonal system") {
    // -Q with the last unknown pinned: the truncated matrix is nonsingular
    const TwoQueueGenerator gen = two_queue_generator(6, 2, 0.9, 0.1, 1.0);
    const LTransform t = l_transform(gen.Q * -1.0);
    const BlockPartition partition({6, 6, 6, 6, 6, 5});
    const Splitting s = stair_splitting(t.A_trunc, StairOrder::First, partition);
    UniformRng rng(8);
    Vector x(35), b(35);
    for (auto& v : x) v = rng.next();
    for (auto& v : b) v = rng.next();
    CHECK(sweep(s, x, b) == staircase_sweep_two_phase(s, x, b));

    // phase structure of the 3x3 example: phase 1 = {x1, x3}, phase 2 = {x2}
    const Splitting s3 = stair_splitting(make_matrix({{3, -1, 0}, {-1, 3, -1}, {-1, -1, 3}}),
                                         StairOrder::First);
    REQUIRE(s3.order);
    CHECK(s3.order->perm == std::vector<std::size_t>{0, 2, 1});

    CHECK_THROWS_AS(staircase_sweep_two_phase(classic_splitting(A2, SplitKind::GaussSeidel),
                                              Vector{0, 0}, Vector{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("solve_stationary converges on the 2x2 example") {
    const IterationHistory h = solve_stationary(classic_splitting(A2, SplitKind::GaussSeidel),
                                                Vector{1, 1}, Vector{0, 0}, 1e-12, 1000);
    CHECK(h.converged);
    CHECK_FALSE(h.diverged);
    CHECK(max_abs_diff(h.final_x, Vector{1.0, 1.0}) < 1e-11);
    CHECK(h.residual_norms.size() == h.iterations + 1);
}

TEST_CASE("solve_stationary with zero data converges in zero sweeps") {
    const IterationHistory h = solve_stationary(classic_splitting(A2, SplitKind::GaussSeidel),
                                                Vector{0, 0}, Vector{0, 0}, 1e-12, 1000);
    CHECK(h.converged);
    CHECK(h.iterations == 0);
    CHECK(h.final_x == Vector{0.0, 0.0});
}

TEST_CASE("anti-Gauss-Seidel needs no more sweeps than Gauss-Seidel") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Matrix A = random_hessenberg_m_matrix(5, seed).A;
        const Vector b(5, 1.0), x0(5, 0.0);
        const auto gs = solve_stationary(classic_splitting(A, SplitKind::GaussSeidel), b, x0,
                                         1e-10, 100000);
        const auto ags = solve_stationary(classic_splitting(A, SplitKind::AntiGaussSeidel), b, x0,
                                          1e-10, 100000);
        REQUIRE(gs.converged);
        REQUIRE(ags.converged);
        CHECK(ags.iterations <= gs.iterations + 2);
    }
}

TEST_CASE("divergence is flagged, not thrown") {
    // M far too small: P = I - 5 A has spectral radius 14
    const Splitting s = custom_splitting(A2, Matrix::identity(2) * 0.2);
    const IterationHistory h = solve_stationary(s, Vector{1, 1}, Vector{0, 0}, 1e-12, 10000);
    CHECK(h.diverged);
    CHECK_FALSE(h.converged);
}
