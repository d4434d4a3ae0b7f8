#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>

#include "stairsplit/experiments.hpp"
#include "test_helpers.hpp"

using namespace stairsplit;
using stairsplit::testing::make_matrix;

TEST_CASE("compare experiment rows are ordered and sorted") {
    const auto rows = experiment_compare(5, 12, 4);
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].expnumber == i + 1);
        CHECK(rows[i].rho_gs >= rows[i].rho_s - 1e-10);
        CHECK(rows[i].rho_s >= rows[i].rho_ags - 1e-10);
        if (i > 0) CHECK(rows[i - 1].rho_gs >= rows[i].rho_gs);
    }
}

TEST_CASE("a single compare trial emits one data row") {
    const auto rows = experiment_compare(5, 1, 1);
    REQUIRE(rows.size() == 1);
    std::ostringstream os;
    write_csv(os, rows);
    const std::string text = os.str();
    CHECK(text.rfind("expnumber,rhoGS,rhoS,rhoAGS\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("csv output is stable and round-trips doubles") {
    const auto rows = experiment_compare(4, 3, 9);
    std::ostringstream once, twice;
    write_csv(once, rows);
    write_csv(twice, rows);
    CHECK(once.str() == twice.str());

    // 17 significant digits reproduce the double exactly
    std::istringstream in(once.str());
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    const std::size_t first_comma = line.find(',');
    const std::size_t second_comma = line.find(',', first_comma + 1);
    const double parsed =
        std::strtod(line.substr(first_comma + 1, second_comma - first_comma - 1).c_str(), nullptr);
    CHECK(parsed == rows[0].rho_gs);
}

TEST_CASE("excess experiment columns") {
    const auto rows = experiment_excess(5, {1e3, 1.0, 1e-3}, 2);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.k_gs >= r.k_s - 1e-9);
        CHECK(r.k_s >= r.k_ags - 1e-9);
        CHECK(std::isfinite(r.rho_gs));
    }
    // strong diagonal dominance: convergence in at most two sweeps
    CHECK(rows[0].k_gs <= 2.0);
    CHECK(rows[0].k_s <= 2.0);
    CHECK(rows[0].k_ags <= 2.0);

    std::ostringstream os;
    write_csv(os, rows);
    CHECK(os.str().rfind("excess,rhoGS,rhoS,rhoAGS,logGS,logS,logAGS\n", 0) == 0);
}

TEST_CASE("sor sweep on a nonsingular matrix") {
    const Matrix A = make_matrix({{2, -1}, {-1, 2}});
    const auto rows = experiment_sor_sweep(A, std::nullopt, {0.5, 1.0, 1.9});
    REQUIRE(rows.size() == 3);
    // omega = 1 reduces GSOR to plain Gauss-Seidel
    CHECK(rows[1].rho_gsor == Catch::Approx(0.25).margin(1e-12));
    CHECK(rows[1].rho_stsor == Catch::Approx(rows[1].rho_stsor2).margin(1e-12));
    for (const auto& r : rows) {
        CHECK(std::isfinite(r.rho_gsor));
        CHECK(r.rho_gsor >= 0.0);
    }
    // overrelaxation beyond the threshold is still reported
    CHECK(rows[2].rho_gsor > rows[1].rho_gsor);

    std::ostringstream os;
    write_csv(os, rows);
    CHECK(os.str().rfind("omega,rhoGSOR,rhoSTSOR,rhoSTSOR2,rhoAGSOR\n", 0) == 0);
}

TEST_CASE("sor sweep switches to convergence factors for singular input") {
    const TwoQueueGenerator gen = two_queue_generator(6, 2, 0.9, 0.1, 1.0);
    const Matrix A = gen.Q * -1.0;
    const auto rows = experiment_sor_sweep(A, gen.partition, {1.0});
    REQUIRE(rows.size() == 1);
    // gamma < 1 proves the gamma machinery engaged (plain rho would be 1)
    CHECK(rows[0].rho_gsor < 1.0);
    CHECK(rows[0].rho_gsor == Catch::Approx(rows[0].rho_stsor).margin(1e-8));
    CHECK(rows[0].rho_gsor == Catch::Approx(rows[0].rho_agsor).margin(1e-8));
}

TEST_CASE("default grids") {
    const auto omegas = default_omega_grid();
    REQUIRE(omegas.size() == 42);
    CHECK(omegas.front() == Catch::Approx(0.05));
    CHECK(omegas.back() == Catch::Approx(2.10));

    const auto etas = default_eta_grid();
    REQUIRE(etas.size() == 50);
    CHECK(etas.front() == Catch::Approx(10.0));
    CHECK(etas.back() == Catch::Approx(1e-6));
}
