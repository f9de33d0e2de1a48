#include "txg/checks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <utility>

#include "txg/errors.hpp"
#include "txg/fwht.hpp"
#include "txg/protocol.hpp"
#include "txg/quantum.hpp"
#include "txg/strategy.hpp"
#include "txg/threelin.hpp"

namespace txg {

TransversalGame random_game(int m, int clause_count, Rng& rng) {
    std::vector<GameClause> clauses;
    clauses.reserve(clause_count);
    std::map<std::pair<std::uint32_t, int>, int> seen_gbit;
    double total = 0.0;
    for (int n = 0; n < clause_count; ++n) {
        BitVector z(m, rng.next_bits(m));
        int r = static_cast<int>(rng.next_bits(2));
        int g = rng.next_bit();
        auto key = std::make_pair(z.word(), r);
        auto found = seen_gbit.find(key);
        if (found != seen_gbit.end())
            g = found->second;
        else
            seen_gbit.emplace(key, g);
        double w = 0.05 + rng.next_unit();
        total += w;
        clauses.push_back({z, r, w, g});
    }
    for (auto& clause : clauses) clause.weight /= total;
    return TransversalGame::make(m, std::move(clauses));
}

namespace {

struct Suite {
    CheckLevel level;
    std::vector<CheckResult> results;

    bool fast() const { return level == CheckLevel::fast; }

    void run(const std::string& name, const std::function<std::string()>& body) {
        CheckResult result{name, false, ""};
        try {
            result.detail = body();  // empty string means pass
            result.passed = result.detail.empty();
        } catch (const std::exception& e) {
            result.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(result));
    }
};

std::string format_double(double x) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.6g", x);
    return buffer;
}

std::vector<double> random_vector(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * rng.next_unit() - 1.0;
    return v;
}

// ---- gf2core ----

std::string check_fwht_involution(bool fast) {
    Rng rng(0x66777401);
    const int max_m = fast ? 3 : 12;
    const int samples = fast ? 3 : 20;
    for (int m = 1; m <= max_m; ++m) {
        const std::size_t n = std::size_t{1} << m;
        for (int rep = 0; rep < samples; ++rep) {
            std::vector<double> v = random_vector(n, rng);
            std::vector<double> twice = fwht(fwht(v));
            double max_abs = 0.0;
            for (double x : v) max_abs = std::max(max_abs, std::abs(x));
            const double scale = static_cast<double>(n) * max_abs;
            for (std::size_t i = 0; i < n; ++i) {
                double expected = static_cast<double>(n) * v[i];
                if (std::abs(twice[i] - expected) > 1e-12 * scale)
                    return "m=" + std::to_string(m) + " index " + std::to_string(i) +
                           " off by " + format_double(twice[i] - expected);
            }
        }
    }
    return "";
}

std::string check_fwht_zero(bool fast) {
    const int max_m = fast ? 3 : 12;
    for (int m = 1; m <= max_m; ++m) {
        std::vector<double> zero(std::size_t{1} << m, 0.0);
        for (double x : fwht(zero))
            if (x != 0.0) return "zero vector maps off zero at m=" + std::to_string(m);
    }
    return "";
}

std::string check_dot_bilinear(bool fast) {
    Rng rng(0x66777402);
    const int samples = fast ? 50 : 500;
    for (int rep = 0; rep < samples; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % (fast ? 3 : kMaxLength));
        BitVector x(m, rng.next_bits(m)), y(m, rng.next_bits(m)), u(m, rng.next_bits(m));
        if (dot(x ^ y, u) != (dot(x, u) ^ dot(y, u)))
            return "bilinearity fails at x=" + x.str() + " y=" + y.str() + " u=" + u.str();
    }
    return "";
}

// ---- games ----

std::string check_theta_mass(bool fast) {
    Rng rng(0x66777403);
    const int games = fast ? 20 : 100;
    for (int rep = 0; rep < games; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % (fast ? 3 : 8));
        int clauses = 1 + static_cast<int>(rng.next_u64() % 12);
        TransversalGame game = random_game(m, clauses, rng);
        double mass = 0.0;
        for (double t : theta_of(game)) mass += std::abs(t);
        if (mass > 0.5 + 1e-12) return "theta mass " + format_double(mass) + " above 1/2";
        GameAnalysis analysis = analyze(game);
        if (analysis.value < 0.5 - 1e-12 || analysis.value > 1.0 + 1e-12)
            return "value " + format_double(analysis.value) + " outside [1/2, 1]";
    }
    return "";
}

std::string check_lambda_naive(bool fast) {
    Rng rng(0x66777404);
    const int games = fast ? 10 : 40;
    for (int rep = 0; rep < games; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % (fast ? 3 : 8));
        TransversalGame game = random_game(m, 1 + static_cast<int>(rng.next_u64() % 10), rng);
        std::vector<double> theta = theta_of(game);
        std::vector<double> lambda = fwht(theta);
        const std::uint32_t n = std::uint32_t{1} << m;
        for (std::uint32_t u = 0; u < n; ++u) {
            double naive = 0.0;
            for (std::uint32_t z = 0; z < n; ++z)
                naive += (std::popcount(u & z) & 1) ? -theta[z] : theta[z];
            if (std::abs(naive - lambda[u]) > 1e-12)
                return "lambda mismatch " + format_double(naive - lambda[u]) + " at u=" +
                       BitVector(m, u).str();
        }
    }
    return "";
}

std::string check_clause_order_invariance(bool fast) {
    Rng rng(0x66777405);
    const int games = fast ? 10 : 50;
    for (int rep = 0; rep < games; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 3);
        int count = 2 + static_cast<int>(rng.next_u64() % 10);
        TransversalGame game = random_game(m, count, rng);
        double value = analyze(game).value;

        // Reversed clause order.
        std::vector<GameClause> reversed(game.clauses().rbegin(), game.clauses().rend());
        double reversed_value = analyze(TransversalGame::make(m, std::move(reversed))).value;
        if (std::abs(reversed_value - value) > 1e-12)
            return "value changed " + format_double(reversed_value - value) +
                   " under clause permutation";

        // Each clause split into two half-weight duplicates.
        std::vector<GameClause> split;
        for (const auto& clause : game.clauses()) {
            GameClause half = clause;
            half.weight = clause.weight / 2;
            split.push_back(half);
            split.push_back(half);
        }
        double split_value = analyze(TransversalGame::make(m, std::move(split))).value;
        if (std::abs(split_value - value) > 1e-12)
            return "value changed " + format_double(split_value - value) +
                   " under duplicate merge";
    }
    return "";
}

std::string check_zero_theta_half(bool fast) {
    Rng rng(0x66777406);
    const int games = fast ? 10 : 50;
    for (int rep = 0; rep < games; ++rep) {
        int m = kMinInstanceLength +
                static_cast<int>(rng.next_u64() % (fast ? 2 : 8));
        ThreeLinInstance inst = gen_contradictory_instance(
            m, 2 * (1 + static_cast<int>(rng.next_u64() % 6)), rng);
        TransversalGame game = game_from_instance(inst);
        for (double t : theta_of(game))
            if (t != 0.0) return "contradictory game has nonzero theta";
        double value = analyze(game).value;
        if (value != 0.5) return "contradictory game value " + format_double(value);
    }
    return "";
}

// ---- strategies ----

std::string check_brute_agreement(bool fast) {
    Rng rng(0x66777407);
    const int games = fast ? 8 : 60;
    for (int rep = 0; rep < games; ++rep) {
        int m = 2 + static_cast<int>(rng.next_u64() % (fast ? 2 : 3));
        TransversalGame game = random_game(m, 1 + static_cast<int>(rng.next_u64() % 12), rng);
        GameAnalysis analysis = analyze(game);
        double brute = brute_force_classical_value(game).second;
        if (std::abs(analysis.value - brute) > 1e-12)
            return "spectral " + format_double(analysis.value) + " vs brute " +
                   format_double(brute);
        DeterministicStrategy alice =
            DeterministicStrategy::from_linear(analysis.u_star, analysis.gamma_star);
        DeterministicStrategy bob = DeterministicStrategy::from_linear(analysis.u_star, 0);
        double expanded = eval_deterministic(game, alice, bob);
        if (std::abs(expanded - analysis.value) > 1e-12)
            return "optimal strategy scores " + format_double(expanded) + " not " +
                   format_double(analysis.value);
    }
    return "";
}

std::string check_linear_expansion(bool fast) {
    Rng rng(0x66777408);
    const int samples = fast ? 30 : 200;
    for (int rep = 0; rep < samples; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % (fast ? 3 : 6));
        TransversalGame game = random_game(m, 1 + static_cast<int>(rng.next_u64() % 10), rng);
        LinearStrategy strat{BitVector(m, rng.next_bits(m)), rng.next_bit()};
        double linear = eval_linear(game, strat);
        double expanded = eval_deterministic(
            game, DeterministicStrategy::from_linear(strat.u, strat.gamma_alice),
            DeterministicStrategy::from_linear(strat.u, 0));
        if (std::abs(linear - expanded) > 1e-12)
            return "linear " + format_double(linear) + " vs expanded " +
                   format_double(expanded);
    }
    return "";
}

std::string check_quantum_bound(bool fast) {
    Rng rng(0x66777409);
    const int games = fast ? 4 : 12;
    const int strategies = fast ? 10 : 40;
    for (int rep = 0; rep < games; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 3);
        TransversalGame game = random_game(m, 1 + static_cast<int>(rng.next_u64() % 8), rng);
        double bound = analyze(game).value;
        for (int sample = 0; sample < strategies; ++sample) {
            int d = 2 + static_cast<int>(rng.next_u64() % 3);
            QuantumStrategy strat = random_quantum_strategy(m, d, rng);
            double value = eval_quantum(game, strat);
            if (value > bound + 1e-9)
                return "quantum " + format_double(value) + " beats classical " +
                       format_double(bound);
        }
    }
    return "";
}

std::string check_best_response(bool fast) {
    Rng rng(0x6677740A);
    const int samples = fast ? 20 : 100;
    for (int rep = 0; rep < samples; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 4);
        TransversalGame game = random_game(m, 1 + static_cast<int>(rng.next_u64() % 10), rng);
        const std::size_t n = std::size_t{1} << m;
        std::vector<std::uint8_t> alice_bits(n), bob_bits(n);
        for (auto& bit : alice_bits) bit = static_cast<std::uint8_t>(rng.next_bit());
        for (auto& bit : bob_bits) bit = static_cast<std::uint8_t>(rng.next_bit());
        DeterministicStrategy alice(m, std::move(alice_bits));
        DeterministicStrategy bob(m, std::move(bob_bits));
        double original = eval_deterministic(game, alice, bob);
        double improved = best_response(game, alice).second;
        if (improved < original - 1e-12)
            return "best response " + format_double(improved) + " below original " +
                   format_double(original);
    }
    return "";
}

// ---- pcp ----

std::string check_round_trip(bool fast) {
    Rng rng(0x6677740B);
    const int samples = fast ? 50 : 500;
    for (int rep = 0; rep < samples; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % kMaxLength);
        BitVector w(m, rng.next_bits(m));
        if (!(linear_to_witness(witness_to_linear(w)) == w))
            return "round trip moved " + w.str();
    }
    return "";
}

std::string check_value_equivalence(bool fast) {
    Rng rng(0x6677740C);
    const int samples = fast ? 10 : 60;
    for (int rep = 0; rep < samples; ++rep) {
        int m = kMinInstanceLength +
                static_cast<int>(rng.next_u64() % (fast ? 2 : 10));
        ThreeLinInstance inst =
            gen_random_instance(m, 1 + static_cast<int>(rng.next_u64() % 20), rng);
        double witness = best_witness(inst).second;
        double game = analyze(game_from_instance(inst)).value;
        if (std::abs(witness - game) > 1e-12)
            return "witness " + format_double(witness) + " vs game " + format_double(game);
    }
    return "";
}

std::string check_planted_value_one(bool fast) {
    Rng rng(0x6677740D);
    const int samples = fast ? 8 : 40;
    for (int rep = 0; rep < samples; ++rep) {
        int m = kMinInstanceLength +
                static_cast<int>(rng.next_u64() % (fast ? 2 : 10));
        auto [inst, hidden] =
            gen_planted_instance(m, 1 + static_cast<int>(rng.next_u64() % 20), rng);
        if (std::abs(witness_value(inst, hidden) - 1.0) > 1e-12)
            return "hidden assignment does not score 1";
        if (std::abs(best_witness(inst).second - 1.0) > 1e-12)
            return "best witness does not score 1";
        if (std::abs(analyze(game_from_instance(inst)).value - 1.0) > 1e-12)
            return "game value is not 1";
    }
    return "";
}

std::string check_pointwise_identity(bool fast) {
    Rng rng(0x6677740E);
    const int samples = fast ? 20 : 100;
    for (int rep = 0; rep < samples; ++rep) {
        int m = kMinInstanceLength +
                static_cast<int>(rng.next_u64() % (fast ? 2 : 10));
        ThreeLinInstance inst =
            gen_random_instance(m, 1 + static_cast<int>(rng.next_u64() % 12), rng);
        BitVector u(m, rng.next_bits(m));
        int gamma = rng.next_bit();
        BitVector w = linear_to_witness({u, gamma});
        for (const auto& eq : inst.equations()) {
            BitVector z = BitVector::basis(eq.i, m) ^ BitVector::basis(eq.j, m) ^
                          BitVector::basis(eq.k, m);
            int lhs = w.bit(eq.i) ^ w.bit(eq.j) ^ w.bit(eq.k);
            int rhs = dot(u, z) ^ gamma;
            if (lhs != rhs) return "identity fails at triple " + z.str();
        }
    }
    return "";
}

// ---- protocol ----

std::string check_transcript_consistency(bool fast) {
    Rng rng(0x6677740F);
    const int rounds = fast ? 200 : 2000;
    int m = 3;
    TransversalGame game = random_game(m, 8, rng);
    GameAnalysis analysis = analyze(game);
    LinearProver alice(analysis.u_star, analysis.gamma_star);
    LinearProver bob(analysis.u_star, 0);
    Rng round_rng(0x13572468);
    for (int rep = 0; rep < rounds; ++rep) {
        ProtocolTranscript tr = run_round(game, alice, bob, round_rng);
        if (!((tr.s ^ tr.t) == tr.z)) return "shares do not reconstruct the offset";
        const GameClause& clause = game.clauses()[tr.clause_index];
        if (!(clause.z == tr.z) || clause.r != tr.r) return "transcript clause mismatch";
        if (tr.accepted != ((tr.a ^ tr.b) == clause.gbit))
            return "acceptance does not match recomputation";
    }
    return "";
}

std::string check_mc_agreement(bool fast) {
    Rng rng(0x66777410);
    const std::uint64_t trials = fast ? 20000 : 100000;
    for (int rep = 0; rep < (fast ? 2 : 5); ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 3);
        TransversalGame game = random_game(m, 1 + static_cast<int>(rng.next_u64() % 8), rng);
        GameAnalysis analysis = analyze(game);
        LinearProver alice(analysis.u_star, analysis.gamma_star);
        LinearProver bob(analysis.u_star, 0);
        Estimate estimate =
            estimate_value(game, alice, bob, trials, 0xC0FFEE00 + rep);
        double slack = 4.0 * std::max(estimate.stderr_,
                                      std::sqrt(analysis.value * (1.0 - analysis.value) /
                                                static_cast<double>(trials)));
        if (std::abs(estimate.value - analysis.value) > slack && slack > 0.0)
            return "estimate " + format_double(estimate.value) + " vs exact " +
                   format_double(analysis.value) + " beyond 4 sigma";
        if (slack == 0.0 && estimate.value != analysis.value)
            return "deterministic game estimated inexactly";
    }
    return "";
}

std::string check_share_uniformity(bool fast) {
    const int m = 2;
    const int draws = fast ? 20000 : 100000;
    const double bit_tolerance = fast ? 0.02 : 0.01;
    Rng rng(0x66777411);
    BitVector fixed_z(m, 0b01);
    std::vector<int> bit_count(m, 0);
    for (int n = 0; n < draws; ++n) {
        auto [s, t] = split_shares(fixed_z, rng);
        if (!((s ^ t) == fixed_z)) return "shares do not reconstruct";
        for (int j = 1; j <= m; ++j) bit_count[j - 1] += s.bit(j);
    }
    for (int j = 0; j < m; ++j) {
        double freq = static_cast<double>(bit_count[j]) / draws;
        if (std::abs(freq - 0.5) > bit_tolerance)
            return "share bit " + std::to_string(j + 1) + " frequency " + format_double(freq);
    }

    // Independence of (s, z) when z is itself random: chi-squared on the
    // 4 x 4 contingency table, df = 9; statistic stays near 9 when s carries
    // no information about z.
    const std::uint32_t cells = 1u << m;
    std::vector<std::uint64_t> joint(cells * cells, 0);
    for (int n = 0; n < draws; ++n) {
        BitVector z(m, rng.next_bits(m));
        auto [s, t] = split_shares(z, rng);
        joint[z.word() * cells + s.word()] += 1;
    }
    std::vector<double> z_margin(cells, 0.0), s_margin(cells, 0.0);
    for (std::uint32_t zi = 0; zi < cells; ++zi)
        for (std::uint32_t si = 0; si < cells; ++si) {
            z_margin[zi] += static_cast<double>(joint[zi * cells + si]);
            s_margin[si] += static_cast<double>(joint[zi * cells + si]);
        }
    double statistic = 0.0;
    for (std::uint32_t zi = 0; zi < cells; ++zi)
        for (std::uint32_t si = 0; si < cells; ++si) {
            double expected = z_margin[zi] * s_margin[si] / draws;
            if (expected > 0.0) {
                double diff = static_cast<double>(joint[zi * cells + si]) - expected;
                statistic += diff * diff / expected;
            }
        }
    // 99.99th percentile of chi-squared with df 9 is ~33.7.
    if (statistic > 33.7)
        return "chi-squared statistic " + format_double(statistic) + " flags dependence";
    return "";
}

}  // namespace

std::vector<CheckResult> run_checks(CheckLevel level) {
    Suite suite{level, {}};
    const bool fast = suite.fast();
    suite.run("gf2.fwht_involution", [&] { return check_fwht_involution(fast); });
    suite.run("gf2.fwht_zero", [&] { return check_fwht_zero(fast); });
    suite.run("gf2.dot_bilinear", [&] { return check_dot_bilinear(fast); });
    suite.run("games.theta_mass", [&] { return check_theta_mass(fast); });
    suite.run("games.lambda_naive", [&] { return check_lambda_naive(fast); });
    suite.run("games.clause_order_invariance",
              [&] { return check_clause_order_invariance(fast); });
    suite.run("games.zero_theta_half", [&] { return check_zero_theta_half(fast); });
    suite.run("strategies.brute_agreement", [&] { return check_brute_agreement(fast); });
    suite.run("strategies.linear_expansion", [&] { return check_linear_expansion(fast); });
    suite.run("strategies.quantum_bound", [&] { return check_quantum_bound(fast); });
    suite.run("strategies.best_response", [&] { return check_best_response(fast); });
    suite.run("pcp.round_trip", [&] { return check_round_trip(fast); });
    suite.run("pcp.value_equivalence", [&] { return check_value_equivalence(fast); });
    suite.run("pcp.planted_value_one", [&] { return check_planted_value_one(fast); });
    suite.run("pcp.pointwise_identity", [&] { return check_pointwise_identity(fast); });
    suite.run("protocol.transcript_consistency",
              [&] { return check_transcript_consistency(fast); });
    suite.run("protocol.mc_agreement", [&] { return check_mc_agreement(fast); });
    suite.run("protocol.share_uniformity", [&] { return check_share_uniformity(fast); });
    return suite.results;
}

}  // namespace txg
