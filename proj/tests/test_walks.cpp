#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <string>

#include "stairsplit/generators.hpp"
#include "stairsplit/matrix_market.hpp"
#include "stairsplit/verify.hpp"
#include "stairsplit/walks.hpp"
#include "test_helpers.hpp"

using namespace stairsplit;
using stairsplit::testing::make_matrix;
using stairsplit::testing::max_abs_diff;

namespace {
const Matrix T_swap = make_matrix({{0, 0.5}, {0.5, 0}});
}

TEST_CASE("substochastic decomposition") {
    const auto p0 = decompose_substochastic(Matrix::identity(3));
    CHECK(p0.T.max_abs() == 0.0);
    CHECK(p0.D.max_abs() == 0.0);

    const auto p = decompose_substochastic(Matrix::identity(2) - T_swap);
    CHECK(p.T == T_swap);
    CHECK(p.D.max_abs() == 0.0);
    CHECK(p.L == make_matrix({{0, 0}, {0.5, 0}}));
    CHECK(p.U == make_matrix({{0, 0.5}, {0, 0}}));

    // row sums above one are rejected, naming the row
    Matrix bad = Matrix::identity(2) - make_matrix({{0.6, 0.6}, {0, 0.2}});
    CHECK_THROWS_WITH(decompose_substochastic(bad),
                      Catch::Matchers::ContainsSubstring("row 1"));
}

TEST_CASE("walk statistics") {
    // one transition from state 4 down to state 1 crosses every level
    const WalkStats down = walk_stats(Walk{{3, 0}}, 4);
    CHECK(down.downward == 1);
    CHECK(down.upward == 0);
    CHECK(down.level_down == std::vector<std::size_t>{1, 1, 1});
    CHECK(down.level_up == std::vector<std::size_t>{0, 0, 0});

    const WalkStats loop = walk_stats(Walk{{0, 1, 0}}, 2);
    CHECK(loop.upward == 1);
    CHECK(loop.downward == 1);
    CHECK(loop.level_up == std::vector<std::size_t>{1});
    CHECK(loop.level_down == std::vector<std::size_t>{1});

    const WalkStats cyc = walk_stats(Walk{{0, 1, 2, 0}}, 3);
    CHECK(cyc.upward == 2);
    CHECK(cyc.downward == 1);
    CHECK(cyc.level_down == std::vector<std::size_t>{1, 1});
}

TEST_CASE("walk enumeration") {
    int count = 0;
    enumerate_walks(Matrix(2, 2), 5, [&](const Walk&, double) { ++count; });
    CHECK(count == 0);

    std::map<std::string, double> walks;
    enumerate_walks(T_swap, 2, [&](const Walk& w, double p) {
        std::string key;
        for (std::size_t s : w.states) key += static_cast<char>('1' + s);
        walks[key] = p;
    });
    REQUIRE(walks.size() == 4);
    CHECK(walks.at("12") == 0.5);
    CHECK(walks.at("21") == 0.5);
    CHECK(walks.at("121") == 0.25);
    CHECK(walks.at("212") == 0.25);

    CHECK_THROWS_WITH(enumerate_walks(T_swap, 10, [](const Walk&, double) {}, 3),
                      "enumeration too large");
}

TEST_CASE("anti-Gauss-Seidel power matrices") {
    CHECK(ags_power_matrix(T_swap, 0) == Matrix::identity(2));
    CHECK(max_abs_diff(ags_power_matrix(T_swap, 1), make_matrix({{0.25, 0}, {0.5, 0}})) < 1e-15);
}

TEST_CASE("Gauss-Seidel bound matrices") {
    const Matrix B = gs_bound_matrix(T_swap, 1);  // k = n-1: just (I-T)^{-1}
    CHECK(max_abs_diff(B, make_matrix({{4.0 / 3, 2.0 / 3}, {2.0 / 3, 4.0 / 3}})) < 1e-14);
    CHECK_THROWS_AS(gs_bound_matrix(T_swap, 0), std::invalid_argument);

    // elementwise dominance over the AGS power at the same k
    const Matrix lhs = ags_power_matrix(T_swap, 1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(lhs(i, j) <= B(i, j) + 1e-15);
}

TEST_CASE("comparison inequality holds on lower Hessenberg chains") {
    const auto trivial = check_comparison_inequality(Matrix(3, 3), 6);
    CHECK(trivial.holds);
    CHECK(trivial.max_violation == 0.0);

    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const std::size_t n = 2 + seed % 5;
        const Matrix T = random_substochastic_hessenberg(n, seed);
        const auto rep = check_comparison_inequality(T, n + 4);
        INFO("seed " << seed << " worst " << rep.max_violation << " at k=" << rep.worst_k);
        CHECK(rep.holds);
    }
}

TEST_CASE("a full chain can violate the comparison inequality") {
    const Matrix T = read_matrix_market(std::string(STAIRSPLIT_TEST_DATA_DIR) +
                                        "/compineq_violation_full_t.mtx");
    const auto rep = check_comparison_inequality(T, T.rows() + 3);
    CHECK_FALSE(rep.holds);
    CHECK(rep.max_violation > 1e-6);
    CHECK(rep.worst_i == 2);
    CHECK(rep.worst_j == 0);
}

TEST_CASE("Neumann series for the no-downward walk class") {
    const Matrix T = random_substochastic_hessenberg(4, 7);
    const auto p = detail::split_substochastic(T, 1e-12);
    const Matrix DU = p.D + p.U;
    const Matrix closed = lu_solve(lu_factor(Matrix::identity(4) - DU), Matrix::identity(4));
    Matrix partial = Matrix::identity(4);
    Matrix term = Matrix::identity(4);
    const double q = DU.inf_norm();
    REQUIRE(q < 1.0);
    for (int m = 1; m <= 30; ++m) {
        term = term * DU;
        partial += term;
        const double bound = std::pow(q, m + 1) / (1.0 - q);
        CHECK(max_abs_diff(partial, closed) <= bound + 1e-12);
    }
}

TEST_CASE("finite-scale Gelfand bound") {
    for (std::uint64_t seed = 31; seed <= 36; ++seed) {
        const std::size_t n = 2 + seed % 4;
        const Matrix T = random_substochastic_hessenberg(n, seed);
        const auto p = detail::split_substochastic(T, 1e-12);
        const double resolvent_norm =
            lu_solve(lu_factor(Matrix::identity(n) - p.T), Matrix::identity(n)).inf_norm();
        const Matrix P_gs =
            lu_solve(lu_factor(Matrix::identity(n) - p.D - p.L), p.U);
        const Matrix P_ags =
            lu_solve(lu_factor(Matrix::identity(n) - p.D - p.U), p.L);
        for (std::size_t k = n - 1; k <= n + 3; ++k) {
            const double lhs = matrix_power(P_ags, k).inf_norm();
            const double rhs = matrix_power(P_gs, k - (n - 1)).inf_norm() * resolvent_norm;
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

TEST_CASE("walk suite: enumerated classes match closed forms") {
    const SuiteReport rep = suite_walks(21, 25, 9);
    INFO(rep.detail);
    CHECK(rep.failures == 0);
}
