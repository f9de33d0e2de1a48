#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "txg/checks.hpp"
#include "txg/errors.hpp"
#include "txg/fwht.hpp"
#include "txg/game.hpp"
#include "txg/rng.hpp"
#include "txg/strategy.hpp"

using namespace txg;

namespace {

TransversalGame single_equation_game() {
    // One clause z=111, r=1, g=1, weight 1: the game of the parity equation
    // w1 XOR w2 XOR w3 = 1.
    return TransversalGame::make(3, {{BitVector::parse("111"), 1, 1.0, 1}});
}

TransversalGame contradictory_game() {
    return TransversalGame::make(3, {{BitVector::parse("111"), 0, 0.5, 0},
                                     {BitVector::parse("111"), 1, 0.5, 1}});
}

}  // namespace

TEST_CASE("theta places signed half-weights on the clause offsets") {
    const std::vector<double> theta = theta_of(single_equation_game());
    REQUIRE(theta.size() == 8);
    CHECK(theta[7] == -0.5);
    for (int z = 0; z < 7; ++z) CHECK(theta[z] == 0.0);
}

TEST_CASE("theta cancels exactly on contradictory clause pairs") {
    const std::vector<double> theta = theta_of(contradictory_game());
    for (double t : theta) CHECK(t == 0.0);
}

TEST_CASE("theta mass never exceeds one half") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const TransversalGame game = random_game(4, 10, rng);
        const std::vector<double> theta = theta_of(game);
        double mass = 0.0, weight_sum = 0.0;
        for (double t : theta) mass += std::abs(t);
        for (const auto& clause : game.clauses()) weight_sum += clause.weight;
        CHECK(mass <= 0.5 * weight_sum + 1e-12);
        CHECK(mass <= 0.5 + 1e-12);
    }
}

TEST_CASE("single equation game has value one via the all-zero word") {
    const GameAnalysis analysis = analyze(single_equation_game());
    CHECK(analysis.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(analysis.u_star == BitVector::zero(3));
    CHECK(analysis.gamma_star == 1);
    // Every word has |lambda| = 1/2 here; the tie must resolve to word 0.
    for (double l : analysis.lambda) CHECK(std::abs(l) == doctest::Approx(0.5));

    const auto brute = brute_force_classical_value(single_equation_game());
    CHECK(brute.second == doctest::Approx(analysis.value).epsilon(1e-12));
}

TEST_CASE("contradictory game has value one half") {
    const GameAnalysis analysis = analyze(contradictory_game());
    CHECK(analysis.value == 0.5);
    CHECK(analysis.u_star == BitVector::zero(3));
    CHECK(analysis.gamma_star == 0);
    for (double l : analysis.lambda) CHECK(l == 0.0);

    const auto brute = brute_force_classical_value(contradictory_game());
    CHECK(brute.second == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("constant-zero acceptance games have value one at the zero word") {
    Rng rng(32);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 2 + static_cast<int>(rng.next_bits(2));
        std::vector<GameClause> clauses;
        const int count = 1 + static_cast<int>(rng.next_bits(3));
        double total = 0.0;
        for (int i = 0; i < count; ++i) {
            GameClause clause{BitVector(m, rng.next_bits(m)),
                              static_cast<int>(rng.next_bits(2)), 0.0, 0};
            clause.weight = 0.1 + rng.next_unit();
            total += clause.weight;
            clauses.push_back(clause);
        }
        for (auto& clause : clauses) clause.weight /= total;
        const GameAnalysis analysis = analyze(TransversalGame::make(m, std::move(clauses)));
        CHECK(analysis.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(analysis.u_star.is_zero());
        CHECK(analysis.gamma_star == 0);
    }
}

TEST_CASE("analysis value is invariant under clause order and duplicate merging") {
    Rng rng(33);
    for (int rep = 0; rep < 30; ++rep) {
        const TransversalGame game = random_game(3, 8, rng);
        const double value = analyze(game).value;

        std::vector<GameClause> reversed(game.clauses().rbegin(), game.clauses().rend());
        CHECK(analyze(TransversalGame::make(game.m(), std::move(reversed))).value ==
              doctest::Approx(value).epsilon(1e-12));

        std::vector<GameClause> split;
        for (const auto& clause : game.clauses()) {
            GameClause half = clause;
            half.weight = clause.weight / 2;
            split.push_back(half);
            split.push_back(half);
        }
        CHECK(analyze(TransversalGame::make(game.m(), std::move(split))).value ==
              doctest::Approx(value).epsilon(1e-12));
    }
}

TEST_CASE("lambda equals the naive signed sum over offsets") {
    Rng rng(34);
    for (int m = 2; m <= 8; ++m) {
        const TransversalGame game = random_game(m, 12, rng);
        const GameAnalysis analysis = analyze(game);
        const std::vector<double> theta = theta_of(game);
        const std::size_t n = std::size_t{1} << m;
        for (std::size_t u = 0; u < n; ++u) {
            double naive = 0.0;
            for (std::size_t z = 0; z < n; ++z)
                naive += ((std::popcount(u & z) & 1) ? -1.0 : 1.0) * theta[z];
            CHECK(std::abs(analysis.lambda[u] - naive) <= 1e-12);
        }
    }
}

TEST_CASE("phi of a zero-offset game is a scaled identity") {
    const TransversalGame game =
        TransversalGame::make(2, {{BitVector::zero(2), 0, 1.0, 0}});
    const Eigen::MatrixXd phi = phi_matrix(game);
    CHECK(phi.isApprox(0.5 * Eigen::MatrixXd::Identity(4, 4), 1e-15));
}

TEST_CASE("phi of the single equation game is a negated half permutation") {
    const Eigen::MatrixXd phi = phi_matrix(single_equation_game());
    for (int s = 0; s < 8; ++s)
        for (int v = 0; v < 8; ++v)
            CHECK(phi(s, v) == ((v == (s ^ 7)) ? -0.5 : 0.0));
}

TEST_CASE("hadamard vectors are eigenvectors of phi") {
    Rng rng(35);
    const TransversalGame game = random_game(4, 9, rng);
    const GameAnalysis analysis = analyze(game);
    const Eigen::MatrixXd phi = phi_matrix(game);
    const int n = 16;
    for (int u = 0; u < n; ++u) {
        Eigen::VectorXd h(n);
        for (int v = 0; v < n; ++v) h(v) = (std::popcount(unsigned(u & v)) & 1) ? -1.0 : 1.0;
        const double residual = (phi * h - analysis.lambda[std::size_t(u)] * h).norm() / 4.0;
        CHECK(residual <= 1e-10);
    }
}

TEST_CASE("spectrum report certifies the transform against a dense eigensolve") {
    Rng rng(36);
    for (int m = 2; m <= 8; ++m) {
        const SpectrumReport report = verify_spectrum(random_game(m, 10, rng));
        CHECK(report.max_residual <= 1e-10);
        CHECK(report.norm_gap <= 1e-9);
    }
}

TEST_CASE("zero theta game has operator norm zero") {
    const SpectrumReport report = verify_spectrum(contradictory_game());
    CHECK(report.max_residual == 0.0);
    CHECK(report.norm_gap <= 1e-12);
    CHECK(analyze(contradictory_game()).value == 0.5);
}

TEST_CASE("single equation game has operator norm one half") {
    const SpectrumReport report = verify_spectrum(single_equation_game());
    CHECK(report.norm_gap <= 1e-12);
    const GameAnalysis analysis = analyze(single_equation_game());
    CHECK(std::abs(analysis.lambda[std::size_t(analysis.u_star.word())]) == 0.5);
}

TEST_CASE("dense operators respect the size cap") {
    const TransversalGame game =
        TransversalGame::make(11, {{BitVector::zero(11), 0, 1.0, 0}});
    CHECK_THROWS_AS(phi_matrix(game), capacity_error);
    CHECK_THROWS_AS(verify_spectrum(game), capacity_error);
}

TEST_CASE("game construction validates clauses") {
    CHECK_THROWS_AS(TransversalGame::make(0, {}), validation_error);
    CHECK_THROWS_AS(TransversalGame::make(25, {}), validation_error);
    CHECK_THROWS_AS(
        TransversalGame::make(3, {{BitVector::parse("11"), 0, 1.0, 0}}),
        validation_error);
    CHECK_THROWS_AS(
        TransversalGame::make(3, {{BitVector::parse("111"), -1, 1.0, 0}}),
        validation_error);
    CHECK_THROWS_AS(
        TransversalGame::make(3, {{BitVector::parse("111"), 0, -0.25, 0},
                                  {BitVector::parse("111"), 1, 1.25, 0}}),
        validation_error);
    CHECK_THROWS_AS(
        TransversalGame::make(3, {{BitVector::parse("111"), 0, 1.0, 2}}),
        validation_error);
    // Same (z, r) with disagreeing g-bits names an inconsistent function.
    CHECK_THROWS_AS(
        TransversalGame::make(3, {{BitVector::parse("111"), 0, 0.5, 0},
                                  {BitVector::parse("111"), 0, 0.5, 1}}),
        validation_error);
    // Weight sum 0.9 is too far from 1 to be round-off.
    CHECK_THROWS_AS(
        TransversalGame::make(3, {{BitVector::parse("111"), 0, 0.9, 0}}),
        validation_error);
}

TEST_CASE("duplicate clauses merge by summing weights") {
    const TransversalGame game =
        TransversalGame::make(3, {{BitVector::parse("101"), 2, 0.25, 1},
                                  {BitVector::parse("010"), 0, 0.5, 0},
                                  {BitVector::parse("101"), 2, 0.25, 1}});
    REQUIRE(game.clause_count() == 2);
    CHECK(game.clauses()[0].z == BitVector::parse("101"));
    CHECK(game.clauses()[0].weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(game.clauses()[1].z == BitVector::parse("010"));
}

TEST_CASE("weights within round-off of one are renormalized") {
    const TransversalGame game = TransversalGame::make(
        2, {{BitVector::parse("11"), 0, 0.5 + 4e-10, 0}, {BitVector::parse("01"), 0, 0.5, 1}});
    double total = 0.0;
    for (const auto& clause : game.clauses()) total += clause.weight;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("game files load with comments and blank lines") {
    std::istringstream in(
        "txg v1\n"
        "# a remark\n"
        "m 3\n"
        "\n"
        "clause z=111 r=1 g=1 w=1.0\n");
    const TransversalGame game = load_game(in);
    CHECK(game.m() == 3);
    CHECK(game.clause_count() == 1);
    CHECK(analyze(game).value == doctest::Approx(1.0));
}

TEST_CASE("game files round trip through save and load") {
    Rng rng(37);
    const TransversalGame game = random_game(4, 7, rng);
    std::ostringstream out;
    save_game(game, out);
    std::istringstream in(out.str());
    const TransversalGame reloaded = load_game(in);
    REQUIRE(reloaded.clause_count() == game.clause_count());
    CHECK(analyze(reloaded).value == doctest::Approx(analyze(game).value).epsilon(1e-15));
    for (std::size_t i = 0; i < game.clause_count(); ++i) {
        CHECK(reloaded.clauses()[i].z == game.clauses()[i].z);
        CHECK(reloaded.clauses()[i].r == game.clauses()[i].r);
        CHECK(reloaded.clauses()[i].gbit == game.clauses()[i].gbit);
        // Loading renormalizes against a sum that is itself one ulp off, so
        // weights survive the trip only to within round-off.
        CHECK(std::abs(reloaded.clauses()[i].weight - game.clauses()[i].weight) <= 1e-15);
    }
}

TEST_CASE("game parser names the offending line") {
    auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            load_game(in);
        } catch (const parse_error& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("") == 1);
    CHECK(line_of("wrong header\n") == 1);
    CHECK(line_of("txg v1\nm x\n") == 2);
    CHECK(line_of("txg v1\nm 3\nclause z=111 r=0 g=1 w=oops\n") == 3);
    CHECK(line_of("txg v1\nm 3\nclause z=11 r=0 g=1 w=1.0\n") == 3);
    CHECK(line_of("txg v1\nm 3\nclause z=111 r=0 g=2 w=1.0\n") == 3);
    CHECK(line_of("txg v1\nm 3\n# no clauses\n") == 4);
    CHECK(line_of("txg v1\nclause z=111 r=0 g=1 w=1.0\n") == 2);
    // Bad weight sum is only detectable once the list is complete.
    CHECK(line_of("txg v1\nm 3\nclause z=111 r=0 g=1 w=0.4\n") == 3);
    // Conflicting g-bit for one (z, r) pair.
    CHECK(line_of("txg v1\nm 3\nclause z=111 r=0 g=1 w=0.5\nclause z=111 r=0 g=0 w=0.5\n") ==
          4);
}
