#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "txg/checks.hpp"
#include "txg/errors.hpp"
#include "txg/fwht.hpp"
#include "txg/game.hpp"
#include "txg/protocol.hpp"
#include "txg/rng.hpp"
#include "txg/strategy.hpp"
#include "txg/threelin.hpp"

namespace {

// The requested operation does not apply to this input (exit code 4).
class applicability_error : public std::runtime_error {
public:
    explicit applicability_error(const std::string& what) : std::runtime_error(what) {}
};

struct Input {
    std::optional<txg::ThreeLinInstance> instance;
    std::optional<txg::TransversalGame> game;
    bool is_instance() const { return instance.has_value(); }
};

std::string sniff_header(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw txg::validation_error("cannot open '" + path + "'");
    std::string line;
    std::getline(file, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

Input load_input(const std::string& path) {
    Input input;
    const std::string header = sniff_header(path);
    if (header == "txg v1") {
        input.game = txg::load_game_file(path);
    } else if (header == "3lin v1") {
        input.instance = txg::load_instance_file(path);
        input.game = txg::game_from_instance(*input.instance);
    } else {
        throw txg::parse_error(1, "unrecognized header '" + header +
                                      "' (expected 'txg v1' or '3lin v1')");
    }
    return input;
}

// Answer tables for both provers, one line each:
//   dtab v1
//   m <int>
//   alice <bitstring of length 2^m, position q answers question word q>
//   bob <bitstring of length 2^m>
std::pair<txg::DeterministicStrategy, txg::DeterministicStrategy> load_tables_file(
    const std::string& path) {
    std::ifstream file(path);
    if (!file) throw txg::validation_error("cannot open '" + path + "'");
    std::string line;
    int line_no = 1;
    if (!std::getline(file, line)) throw txg::parse_error(1, "empty file, expected 'dtab v1'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "dtab v1") throw txg::parse_error(1, "expected header 'dtab v1'");

    int m = -1;
    std::optional<std::vector<std::uint8_t>> alice, bob;
    auto parse_table = [&](const std::string& bits) {
        if (m < 0) throw txg::parse_error(line_no, "table before 'm <integer>' line");
        const std::size_t want = std::size_t{1} << m;
        if (bits.size() != want)
            throw txg::parse_error(line_no, "table needs " + std::to_string(want) +
                                                " characters, got " +
                                                std::to_string(bits.size()));
        std::vector<std::uint8_t> table(want);
        for (std::size_t q = 0; q < want; ++q) {
            if (bits[q] != '0' && bits[q] != '1')
                throw txg::parse_error(line_no,
                                       std::string("table character '") + bits[q] + "'");
            table[q] = static_cast<std::uint8_t>(bits[q] - '0');
        }
        return table;
    };

    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream stream(line);
        std::string head;
        if (!(stream >> head) || head[0] == '#') continue;
        std::string rest;
        if (!(stream >> rest)) throw txg::parse_error(line_no, "missing value after '" + head + "'");
        std::string extra;
        if (stream >> extra) throw txg::parse_error(line_no, "trailing data '" + extra + "'");
        if (head == "m") {
            try {
                m = std::stoi(rest);
            } catch (const std::exception&) {
                throw txg::parse_error(line_no, "m '" + rest + "' is not an integer");
            }
            if (m < 1 || m > txg::kMaxLength)
                throw txg::parse_error(line_no, "m outside [1, " +
                                                    std::to_string(txg::kMaxLength) + "]");
        } else if (head == "alice") {
            if (alice) throw txg::parse_error(line_no, "duplicate 'alice' line");
            alice = parse_table(rest);
        } else if (head == "bob") {
            if (bob) throw txg::parse_error(line_no, "duplicate 'bob' line");
            bob = parse_table(rest);
        } else {
            throw txg::parse_error(line_no, "unrecognized line '" + head + "'");
        }
    }
    if (m < 0) throw txg::parse_error(line_no + 1, "missing 'm <integer>' line");
    if (!alice) throw txg::parse_error(line_no + 1, "missing 'alice' line");
    if (!bob) throw txg::parse_error(line_no + 1, "missing 'bob' line");
    return {txg::DeterministicStrategy(m, std::move(*alice)),
            txg::DeterministicStrategy(m, std::move(*bob))};
}

int cmd_analyze(const std::string& path) {
    const Input input = load_input(path);
    const txg::GameAnalysis analysis = txg::analyze(*input.game);
    std::printf("kind %s\n", input.is_instance() ? "instance" : "game");
    std::printf("m %d\n", input.game->m());
    std::printf("clauses %zu\n", input.game->clause_count());
    std::printf("value %.15f u=%s gamma=%d\n", analysis.value, analysis.u_star.str().c_str(),
                analysis.gamma_star);
    return 0;
}

int cmd_value(const std::string& path, const std::string& method, int threads) {
    const Input input = load_input(path);
    double value = 0.0;
    if (method == "spectral") {
        value = txg::analyze(*input.game).value;
    } else if (method == "brute") {
        value = txg::brute_force_classical_value(*input.game, threads).second;
    } else if (method == "witness") {
        if (!input.is_instance())
            throw applicability_error(
                "method 'witness' needs a '3lin v1' instance, got a raw game file");
        value = txg::best_witness(*input.instance, threads).second;
    }
    std::printf("%.15f\n", value);
    return 0;
}

int cmd_simulate(const std::string& path, std::uint64_t trials, std::uint64_t seed,
                 const std::string& strategy, int threads, const std::string& transcript_path) {
    const Input input = load_input(path);
    const txg::TransversalGame& game = *input.game;

    std::unique_ptr<txg::Prover> alice, bob;
    double exact = 0.0;
    if (strategy == "honest") {
        if (!input.is_instance())
            throw applicability_error(
                "strategy 'honest' needs a '3lin v1' instance, got a raw game file");
        const txg::BitVector witness = txg::best_witness(*input.instance, threads).first;
        const txg::LinearStrategy linear = txg::witness_to_linear(witness);
        alice = std::make_unique<txg::LinearProver>(linear.u, linear.gamma_alice);
        bob = std::make_unique<txg::LinearProver>(linear.u, 0);
        exact = txg::eval_linear(game, linear);
    } else if (strategy.rfind("linear:", 0) == 0) {
        const std::string spec = strategy.substr(7);
        const std::size_t comma = spec.find(',');
        if (comma == std::string::npos || comma + 2 != spec.size() ||
            (spec[comma + 1] != '0' && spec[comma + 1] != '1'))
            throw txg::validation_error("strategy must be linear:<bits>,<0|1>, got '" +
                                        strategy + "'");
        const txg::BitVector u = txg::BitVector::parse(spec.substr(0, comma));
        const int gamma = spec[comma + 1] - '0';
        if (u.length() != game.m())
            throw applicability_error("strategy word has length " +
                                      std::to_string(u.length()) + ", game has m=" +
                                      std::to_string(game.m()));
        alice = std::make_unique<txg::LinearProver>(u, gamma);
        bob = std::make_unique<txg::LinearProver>(u, 0);
        exact = txg::eval_linear(game, txg::LinearStrategy{u, gamma});
    } else if (strategy.rfind("tables:", 0) == 0) {
        auto tables = load_tables_file(strategy.substr(7));
        if (tables.first.m() != game.m())
            throw applicability_error("tables are for m=" + std::to_string(tables.first.m()) +
                                      ", game has m=" + std::to_string(game.m()));
        exact = txg::eval_deterministic(game, tables.first, tables.second);
        alice = std::make_unique<txg::TableProver>(std::move(tables.first));
        bob = std::make_unique<txg::TableProver>(std::move(tables.second));
    } else {
        throw txg::validation_error("strategy must be honest, linear:<bits>,<0|1> or "
                                    "tables:<file>, got '" +
                                    strategy + "'");
    }

    std::vector<txg::ProtocolTranscript> transcripts;
    std::vector<txg::ProtocolTranscript>* sink =
        transcript_path.empty() ? nullptr : &transcripts;
    const txg::Estimate estimate =
        txg::estimate_value(game, *alice, *bob, trials, seed, threads, sink);
    if (sink) {
        std::ofstream out(transcript_path);
        if (!out) throw txg::validation_error("cannot open '" + transcript_path + "'");
        txg::write_transcript_log(transcripts, out);
    }

    const double diff = std::abs(estimate.value - exact);
    const double sigma = diff == 0.0 ? 0.0 : diff / estimate.stderr_;
    std::printf("trials %llu\n", static_cast<unsigned long long>(estimate.trials));
    std::printf("accepted %llu\n", static_cast<unsigned long long>(estimate.accepted));
    std::printf("estimate %.15f\n", estimate.value);
    std::printf("stderr %.15f\n", estimate.stderr_);
    std::printf("exact %.15f\n", exact);
    std::printf("sigma %.3f\n", sigma);
    return 0;
}

int cmd_gen(const std::string& path, const std::string& type, int m, int eqs,
            std::uint64_t seed) {
    txg::Rng rng(seed);
    std::ofstream out(path);
    if (!out) throw txg::validation_error("cannot open '" + path + "'");
    if (type == "sat3lin") {
        const auto [instance, witness] = txg::gen_planted_instance(m, eqs, rng);
        txg::save_instance(instance, out, "planted " + witness.str());
    } else if (type == "unsat3lin") {
        txg::save_instance(txg::gen_contradictory_instance(m, eqs, rng), out);
    } else {
        txg::save_instance(txg::gen_random_instance(m, eqs, rng), out);
    }
    return 0;
}

int cmd_check(const std::string& level, bool corrupt_fwht) {
    if (corrupt_fwht) txg::set_fwht_corruption(true);
    const auto results =
        txg::run_checks(level == "full" ? txg::CheckLevel::full : txg::CheckLevel::fast);
    std::size_t passed = 0;
    for (const auto& result : results) {
        if (result.passed) {
            ++passed;
            std::printf("PASS %s\n", result.name.c_str());
        } else {
            std::printf("FAIL %s: %s\n", result.name.c_str(), result.detail.c_str());
        }
    }
    std::printf("passed %zu/%zu (level %s)\n", passed, results.size(), level.c_str());
    return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transversal XOR game toolkit: spectral analysis, exact and simulated "
                 "values, parity-instance reductions, invariant checks"};
    app.require_subcommand(1);

    std::string path, out_path, method = "spectral", strategy = "honest";
    std::string gen_type, transcript_path, level = "fast";
    std::uint64_t trials = 100000, seed = 1;
    int threads = 1, gen_m = 0, gen_eqs = 0;
    bool corrupt_fwht = false;

    CLI::App* analyze = app.add_subcommand("analyze", "report m, clause count and value");
    analyze->add_option("path", path, "'txg v1' game or '3lin v1' instance")->required();

    CLI::App* value = app.add_subcommand("value", "print the game value");
    value->add_option("path", path, "'txg v1' game or '3lin v1' instance")->required();
    value->add_option("--method", method, "spectral, brute or witness")
        ->check(CLI::IsMember({"spectral", "brute", "witness"}));
    value->add_option("--threads", threads, "worker count (results do not depend on it)");

    CLI::App* simulate = app.add_subcommand("simulate", "estimate the value by played rounds");
    simulate->add_option("path", path, "'txg v1' game or '3lin v1' instance")->required();
    simulate->add_option("--trials", trials, "number of rounds");
    simulate->add_option("--seed", seed, "round sampling seed");
    simulate->add_option("--strategy", strategy,
                         "honest, linear:<bits>,<0|1> or tables:<file>");
    simulate->add_option("--threads", threads, "worker count (results do not depend on it)");
    simulate->add_option("--transcript", transcript_path, "write per-round log to this file");

    CLI::App* gen = app.add_subcommand("gen", "write a generated '3lin v1' instance");
    gen->add_option("path", out_path, "output file")->required();
    gen->add_option("--type", gen_type, "sat3lin, unsat3lin or random")
        ->required()
        ->check(CLI::IsMember({"sat3lin", "unsat3lin", "random"}));
    gen->add_option("--m", gen_m, "variable count")->required();
    gen->add_option("--eqs", gen_eqs, "equation count")->required();
    gen->add_option("--seed", seed, "generator seed");

    CLI::App* check = app.add_subcommand("check", "run the invariant suites");
    check->add_option("--level", level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));
    check->add_flag("--corrupt-fwht", corrupt_fwht)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(path);
        if (value->parsed()) return cmd_value(path, method, threads);
        if (simulate->parsed())
            return cmd_simulate(path, trials, seed, strategy, threads, transcript_path);
        if (gen->parsed()) return cmd_gen(out_path, gen_type, gen_m, gen_eqs, seed);
        if (check->parsed()) return cmd_check(level, corrupt_fwht);
    } catch (const txg::parse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const applicability_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const txg::capacity_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const txg::validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
