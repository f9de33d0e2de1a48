#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "txg/checks.hpp"
#include "txg/fwht.hpp"
#include "txg/game.hpp"
#include "txg/protocol.hpp"
#include "txg/quantum.hpp"
#include "txg/rng.hpp"
#include "txg/strategy.hpp"
#include "txg/threelin.hpp"

using namespace txg;

namespace {

std::string g_cli;
std::filesystem::path g_dir;

std::string run_cli(const std::string& args, int* status = nullptr) {
    const std::string command = g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string output;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0)
        output.append(buffer, got);
    const int raw = pclose(pipe);
    if (status) *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return output;
}

std::string path_of(const std::string& name) { return (g_dir / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool report(int criterion, const char* name, bool ok, const std::string& detail = "") {
    if (ok)
        std::printf("[criterion %d] %s: PASS\n", criterion, name);
    else
        std::printf("[criterion %d] %s: FAIL (%s)\n", criterion, name, detail.c_str());
    std::fflush(stdout);
    return ok;
}

BitVector random_word(int m, Rng& rng) {
    return BitVector(m, static_cast<std::uint32_t>(rng.next_bits(m)));
}

void naive_transform(const std::vector<double>& in, std::vector<double>& out) {
    const std::size_t n = in.size();
    out.assign(n, 0.0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            const int parity = std::popcount(u & v) & 1;
            out[u] += (parity ? -1.0 : 1.0) * in[v];
        }
}

}  // namespace

TEST_CASE("spectral value matches brute force and is achieved") {
    Rng rng(0xACC70001);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 200 && ok; ++i) {
        const int m = 2 + i % 3;
        const int clauses = 1 + static_cast<int>(rng.next_bits(4));
        const TransversalGame game = random_game(m, clauses, rng);
        const GameAnalysis analysis = analyze(game);
        const double brute = brute_force_classical_value(game, 4).second;
        if (std::abs(analysis.value - brute) > 1e-12) {
            ok = false;
            detail = "game " + std::to_string(i) + ": spectral " +
                     std::to_string(analysis.value) + " vs brute " + std::to_string(brute);
            break;
        }
        const DeterministicStrategy alice =
            DeterministicStrategy::from_linear(analysis.u_star, analysis.gamma_star);
        const DeterministicStrategy bob = DeterministicStrategy::from_linear(analysis.u_star, 0);
        const double achieved = eval_deterministic(game, alice, bob);
        if (std::abs(achieved - analysis.value) > 1e-12) {
            ok = false;
            detail = "game " + std::to_string(i) + ": expanded strategy reaches " +
                     std::to_string(achieved) + ", not " + std::to_string(analysis.value);
        }
    }
    CHECK(report(1, "spectral value matches brute force and is achieved", ok, detail));
}

TEST_CASE("no sampled quantum strategy beats the spectral value") {
    Rng rng(0xACC70002);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 50 && ok; ++i) {
        const int m = 1 + i % 3;
        const int clauses = 1 + static_cast<int>(rng.next_bits(3));
        const TransversalGame game = random_game(m, clauses, rng);
        const double bound = analyze(game).value + 1e-9;
        for (int j = 0; j < 200; ++j) {
            const int d = 2 + j % 3;
            const QuantumStrategy strat = random_quantum_strategy(m, d, rng);
            const double won = eval_quantum(game, strat);
            if (won > bound) {
                ok = false;
                detail = "game " + std::to_string(i) + " strategy " + std::to_string(j) +
                         " (d=" + std::to_string(d) + "): " + std::to_string(won) +
                         " exceeds " + std::to_string(bound);
                break;
            }
        }
    }
    CHECK(report(2, "no sampled quantum strategy beats the spectral value", ok, detail));
}

TEST_CASE("Hadamard vectors diagonalize the game operator") {
    Rng rng(0xACC70003);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 50 && ok; ++i) {
        const int m = 2 + i % 7;
        const int clauses = 1 + static_cast<int>(rng.next_bits(4));
        const TransversalGame game = random_game(m, clauses, rng);
        const SpectrumReport spectrum = verify_spectrum(game);
        if (spectrum.max_residual > 1e-10) {
            ok = false;
            detail = "game " + std::to_string(i) + " (m=" + std::to_string(m) +
                     "): residual " + std::to_string(spectrum.max_residual);
        } else if (spectrum.norm_gap > 1e-9) {
            ok = false;
            detail = "game " + std::to_string(i) + " (m=" + std::to_string(m) +
                     "): norm gap " + std::to_string(spectrum.norm_gap);
        }
    }
    CHECK(report(3, "Hadamard vectors diagonalize the game operator", ok, detail));
}

TEST_CASE("witness search and game analysis agree through the reduction") {
    Rng rng(0xACC70004);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 100 && ok; ++i) {
        const int m = 3 + i % 10;
        const int eqs = 1 + static_cast<int>(rng.next_bits(4)) % 20;
        const ThreeLinInstance inst = gen_random_instance(m, eqs, rng);
        const double best = best_witness(inst, 4).second;
        const double spectral = analyze(game_from_instance(inst)).value;
        if (std::abs(best - spectral) > 1e-12) {
            ok = false;
            detail = "instance " + std::to_string(i) + ": witness " + std::to_string(best) +
                     " vs spectral " + std::to_string(spectral);
        }
    }
    for (int i = 0; i < 100 && ok; ++i) {
        const int m = 3 + i % 10;
        const ThreeLinInstance inst = gen_random_instance(m, 3 + i % 12, rng);
        const TransversalGame game = game_from_instance(inst);
        const BitVector witness = random_word(m, rng);
        const double scored = witness_value(inst, witness);
        const double played = eval_linear(game, witness_to_linear(witness));
        if (std::abs(scored - played) > 1e-12) {
            ok = false;
            detail = "embedding pair " + std::to_string(i) + ": " + std::to_string(scored) +
                     " vs " + std::to_string(played);
        }
    }
    for (int i = 0; i < 100 && ok; ++i) {
        const int m = 3 + i % 10;
        const ThreeLinInstance inst = gen_random_instance(m, 3 + i % 12, rng);
        const TransversalGame game = game_from_instance(inst);
        const LinearStrategy strat{random_word(m, rng), rng.next_bit()};
        const double played = eval_linear(game, strat);
        const double scored = witness_value(inst, linear_to_witness(strat));
        if (std::abs(scored - played) > 1e-12) {
            ok = false;
            detail = "decoding pair " + std::to_string(i) + ": " + std::to_string(played) +
                     " vs " + std::to_string(scored);
        }
    }
    CHECK(report(4, "witness search and game analysis agree through the reduction", ok, detail));
}

TEST_CASE("planted instances win every round") {
    Rng rng(0xACC70005);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 20 && ok; ++i) {
        const int m = 3 + i % 10;
        const int eqs = 2 + i % 9;
        const auto [inst, hidden] = gen_planted_instance(m, eqs, rng);
        const TransversalGame game = game_from_instance(inst);
        if (std::abs(analyze(game).value - 1.0) > 1e-12) {
            ok = false;
            detail = "instance " + std::to_string(i) + ": value " +
                     std::to_string(analyze(game).value);
            break;
        }
        const LinearStrategy honest = witness_to_linear(best_witness(inst, 4).first);
        const LinearProver alice(honest.u, honest.gamma_alice);
        const LinearProver bob(honest.u, 0);
        const Estimate estimate =
            estimate_value(game, alice, bob, 5000, 0xBEE50000 + i, 4, nullptr);
        if (estimate.accepted != estimate.trials) {
            ok = false;
            detail = "instance " + std::to_string(i) + ": " +
                     std::to_string(estimate.accepted) + "/" +
                     std::to_string(estimate.trials) + " rounds accepted";
        }
    }
    CHECK(report(5, "planted instances win every round", ok, detail));
}

TEST_CASE("contradictory instances sit at half") {
    Rng rng(0xACC70006);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 20 && ok; ++i) {
        const int m = 3 + i % 10;
        const int eqs = 2 * (1 + i % 8);
        const ThreeLinInstance inst = gen_contradictory_instance(m, eqs, rng);
        const GameAnalysis analysis = analyze(game_from_instance(inst));
        for (double mass : analysis.theta)
            if (mass != 0.0) {
                ok = false;
                detail = "instance " + std::to_string(i) + ": theta not identically zero";
                break;
            }
        if (ok && analysis.value != 0.5) {
            ok = false;
            detail = "instance " + std::to_string(i) + ": value " +
                     std::to_string(analysis.value) + " is not exactly 0.5";
        }
    }
    if (ok) {
        const ThreeLinInstance inst = gen_contradictory_instance(6, 12, rng);
        const TransversalGame game = game_from_instance(inst);
        const GameAnalysis analysis = analyze(game);
        const LinearProver alice(analysis.u_star, analysis.gamma_star);
        const LinearProver bob(analysis.u_star, 0);
        const std::uint64_t trials = 1000000;
        const Estimate estimate = estimate_value(game, alice, bob, trials, 0xBEE60000, 4, nullptr);
        const double sigma = 0.5 / std::sqrt(static_cast<double>(trials));
        if (std::abs(estimate.value - 0.5) > 4.0 * sigma) {
            ok = false;
            detail = "Monte Carlo " + std::to_string(estimate.value) + " is more than 4 sigma (" +
                     std::to_string(4.0 * sigma) + ") from 0.5";
        }
    }
    CHECK(report(6, "contradictory instances sit at half", ok, detail));
}

TEST_CASE("transform involution and naive agreement") {
    Rng rng(0xACC70007);
    bool ok = true;
    std::string detail;
    for (int m = 1; m <= 12 && ok; ++m) {
        const std::size_t n = std::size_t{1} << m;
        for (int rep = 0; rep < 20 && ok; ++rep) {
            std::vector<double> v(n);
            double max_abs = 0.0;
            for (double& x : v) {
                x = 2.0 * rng.next_unit() - 1.0;
                max_abs = std::max(max_abs, std::abs(x));
            }
            std::vector<double> twice = fwht(fwht(v));
            const double scale = static_cast<double>(n) * max_abs;
            for (std::size_t k = 0; k < n; ++k)
                if (std::abs(twice[k] - static_cast<double>(n) * v[k]) > 1e-12 * scale) {
                    ok = false;
                    detail = "m=" + std::to_string(m) + " rep " + std::to_string(rep) +
                             " index " + std::to_string(k);
                    break;
                }
        }
    }
    for (int m = 1; m <= 8 && ok; ++m) {
        const std::size_t n = std::size_t{1} << m;
        std::vector<double> v(n);
        for (double& x : v) x = 2.0 * rng.next_unit() - 1.0;
        std::vector<double> naive;
        naive_transform(v, naive);
        const std::vector<double> fast = fwht(v);
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(fast[k] - naive[k]) > 1e-12 * static_cast<double>(n)) {
                ok = false;
                detail = "naive mismatch at m=" + std::to_string(m) + " index " +
                         std::to_string(k);
                break;
            }
    }
    CHECK(report(7, "transform involution and naive agreement", ok, detail));
}

TEST_CASE("seeded commands reproduce byte for byte") {
    bool ok = !g_cli.empty();
    std::string detail = ok ? "" : "no --cli=<path> given";

    auto expect_same = [&](const std::string& label, const std::string& a,
                           const std::string& b) {
        if (ok && a != b) {
            ok = false;
            detail = label + " differs";
        }
    };

    if (ok) {
        const std::string a = path_of("rep-a.3lin");
        const std::string b = path_of("rep-b.3lin");
        run_cli("gen " + a + " --type sat3lin --m 6 --eqs 12 --seed 2026");
        run_cli("gen " + b + " --type sat3lin --m 6 --eqs 12 --seed 2026");
        expect_same("gen sat3lin", slurp(a), slurp(b));
        run_cli("gen " + a + " --type unsat3lin --m 5 --eqs 8 --seed 31");
        run_cli("gen " + b + " --type unsat3lin --m 5 --eqs 8 --seed 31");
        expect_same("gen unsat3lin", slurp(a), slurp(b));
    }
    if (ok) {
        const std::string inst = path_of("rep.3lin");
        run_cli("gen " + inst + " --type random --m 4 --eqs 7 --seed 14");
        expect_same("analyze", run_cli("analyze " + inst), run_cli("analyze " + inst));
        for (const std::string method : {"spectral", "brute", "witness"}) {
            const std::string one =
                run_cli("value " + inst + " --method " + method + " --threads 1");
            const std::string four =
                run_cli("value " + inst + " --method " + method + " --threads 4");
            expect_same("value --method " + method + " across thread counts", one, four);
            expect_same("value --method " + method + " across runs", one,
                        run_cli("value " + inst + " --method " + method + " --threads 1"));
        }
        const std::string sim = "simulate " + inst + " --trials 20000 --seed 5";
        const std::string log1 = path_of("rep-1.log");
        const std::string log4 = path_of("rep-4.log");
        const std::string one = run_cli(sim + " --threads 1 --transcript " + log1);
        const std::string four = run_cli(sim + " --threads 4 --transcript " + log4);
        expect_same("simulate across thread counts", one, four);
        expect_same("simulate transcripts across thread counts", slurp(log1), slurp(log4));
        expect_same("simulate across runs", one,
                    run_cli(sim + " --threads 1 --transcript " + log1));
        expect_same("check", run_cli("check --level fast"), run_cli("check --level fast"));
    }
    CHECK(report(8, "seeded commands reproduce byte for byte", ok, detail));
}

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--cli=", 0) == 0) g_cli = arg.substr(6);
    }
    char tmpl[] = "/tmp/txg-acceptance-XXXXXX";
    if (mkdtemp(tmpl) == nullptr) {
        std::perror("mkdtemp");
        return 1;
    }
    g_dir = tmpl;
    doctest::Context context(argc, argv);
    const int rc = context.run();
    std::filesystem::remove_all(g_dir);
    return rc;
}
