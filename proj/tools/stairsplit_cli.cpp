// Command-line driver: spectral-radius comparison tables, the excess-eta
// sweep, overrelaxation sweeps on generated or file-loaded matrices, and
// the randomized verification suites. Output is CSV on stdout or --out;
// run configuration is logged to stderr so every row is reproducible.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stairsplit/stairsplit.hpp"

namespace {

using namespace stairsplit;

int write_rows_or_fail(const std::string& out_path, const auto& rows) {
    if (out_path.empty()) {
        write_csv(std::cout, rows);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);  // LF line endings everywhere
    if (!out) {
        std::cerr << "error: cannot open " << out_path << " for writing\n";
        return 2;
    }
    write_csv(out, rows);
    return 0;
}

struct SorOptions {
    std::string matrix_path;
    std::string partition_path;
    std::string generator = "two-queue";
    QueueParams queue;
    std::vector<double> omegas;
    bool block = false;
    bool flip = false;
    std::string out_path;
};

int run_sor_sweep(const SorOptions& opt) {
    Matrix A;
    std::optional<BlockPartition> partition;
    GeneratorSpec spec;
    if (!opt.matrix_path.empty()) {
        spec.family = GeneratorSpec::Family::File;
        spec.path = opt.matrix_path;
        std::optional<std::string> sidecar;
        if (!opt.partition_path.empty()) sidecar = opt.partition_path;
        auto loaded = load_generator(opt.matrix_path, sidecar);
        A = std::move(loaded.first);
        partition = std::move(loaded.second);
    } else if (opt.generator == "two-queue") {
        spec.family = GeneratorSpec::Family::TwoQueue;
        spec.queue = opt.queue;
        auto gen = two_queue_generator(opt.queue.n, opt.queue.s, opt.queue.lambda, opt.queue.mu,
                                       opt.queue.lambda1);
        A = gen.Q * -1.0;  // the singular M-matrix is -Q
        partition = gen.partition;
    } else {
        std::cerr << "error: unknown generator '" << opt.generator << "'\n";
        return 2;
    }
    std::cerr << "sor-sweep: " << spec.describe() << "\n";

    if (opt.flip) {
        A = reversed(A);
        if (partition) {
            std::vector<std::size_t> sizes(partition->sizes.rbegin(), partition->sizes.rend());
            partition = BlockPartition(sizes);
        }
        std::cerr << "sor-sweep: reversal permutation applied; GS and AGS exchange roles, so the"
                     " fast method of the original numbering is the one reported as AGSOR\n";
    }
    if (!opt.block) partition = std::nullopt;
    if (has_zero_column_sums(A))
        std::cerr << "sor-sweep: singular generator-form input; columns are convergence factors"
                     " gamma of the primed splittings\n";

    const std::vector<double> omegas = opt.omegas.empty() ? default_omega_grid() : opt.omegas;
    return write_rows_or_fail(opt.out_path, experiment_sor_sweep(A, partition, omegas));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"comparison experiments for Hessenberg M-matrix splittings"};
    app.require_subcommand(1);

    std::size_t n = 5, trials = 50;
    std::uint64_t seed = 1;
    std::string out_path;

    auto* compare = app.add_subcommand(
        "compare", "spectral radii of GS, stair and AGS on random Hessenberg M-matrices");
    compare->add_option("--n", n, "matrix dimension");
    compare->add_option("--trials", trials, "number of random instances");
    compare->add_option("--seed", seed, "seed of the first instance");
    compare->add_option("--out", out_path, "CSV output path (default stdout)");

    std::vector<double> etas;
    auto* excess = app.add_subcommand(
        "excess", "radii and iteration counts as the excess eta approaches zero");
    excess->add_option("--n", n, "matrix dimension");
    excess->add_option("--eta-list", etas, "excess values (default: 50 points, 1e1 down to 1e-6)");
    excess->add_option("--seed", seed, "seed of the first instance");
    excess->add_option("--out", out_path, "CSV output path (default stdout)");

    SorOptions sor;
    auto* sweep = app.add_subcommand(
        "sor-sweep", "overrelaxation sweep of GSOR/STSOR/STSOR2/AGSOR radii");
    sweep->add_option("--matrix", sor.matrix_path, "Matrix Market file with the system matrix");
    sweep->add_option("--partition", sor.partition_path,
                      "block partition sidecar (one block size per line)");
    sweep->add_option("--generator", sor.generator,
                      "built-in generator when no --matrix is given (two-queue)");
    sweep->add_option("--queue-n", sor.queue.n, "two-queue: states per queue");
    sweep->add_option("--queue-s", sor.queue.s, "two-queue: number of servers");
    sweep->add_option("--queue-lambda", sor.queue.lambda, "two-queue: arrival rate");
    sweep->add_option("--queue-mu", sor.queue.mu, "two-queue: service rate");
    sweep->add_option("--queue-lambda1", sor.queue.lambda1, "two-queue: overflow rate");
    sweep->add_option("--omega-list", sor.omegas, "omega grid (default 0.05:0.05:2.10)");
    sweep->add_flag("--block", sor.block, "use block splittings over the partition");
    sweep->add_flag("--flip", sor.flip,
                    "relabel by the reversal permutation (for upper Hessenberg input)");
    sweep->add_option("--out", sor.out_path, "CSV output path (default stdout)");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run the randomized property suites");
    verify->add_option("--suite", suite, "theorems | exchange | substitution | singular | walks | all");
    verify->add_option("--trials", trials, "trials per suite")->default_val(50);
    verify->add_option("--seed", seed, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (compare->parsed()) {
            std::cerr << "compare: family=random_hessenberg n=" << n << " trials=" << trials
                      << " seed=" << seed << "\n";
            return write_rows_or_fail(out_path, experiment_compare(n, trials, seed));
        }
        if (excess->parsed()) {
            if (etas.empty()) etas = default_eta_grid();
            std::cerr << "excess: family=excess n=" << n << " seed=" << seed
                      << " points=" << etas.size() << "\n";
            return write_rows_or_fail(out_path, experiment_excess(n, etas, seed));
        }
        if (sweep->parsed()) return run_sor_sweep(sor);
        if (verify->parsed()) {
            bool ok = true;
            for (const SuiteReport& rep : run_suites(suite, seed, trials)) {
                ok = ok && rep.passed();
                std::cout << rep.name << "," << (rep.passed() ? "pass" : "FAIL") << ","
                          << rep.checks - rep.failures << "/" << rep.checks << ",worst_margin="
                          << rep.worst_margin;
                if (!rep.detail.empty()) std::cout << ",at=" << rep.detail;
                std::cout << "\n";
            }
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
