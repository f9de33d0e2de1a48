#include "txg/strategy.hpp"

#include <bit>
#include <string>
#include <thread>

#include "txg/errors.hpp"
#include "txg/fwht.hpp"

namespace txg {

DeterministicStrategy::DeterministicStrategy(int m, std::vector<std::uint8_t> answers)
    : m_(m), answers_(std::move(answers)) {
    if (m < 1 || m > kMaxLength)
        throw validation_error("strategy length " + std::to_string(m) + " outside [1, " +
                               std::to_string(kMaxLength) + "]");
    if (answers_.size() != (std::size_t{1} << m))
        throw validation_error("strategy table has " + std::to_string(answers_.size()) +
                               " entries, expected " + std::to_string(std::size_t{1} << m));
    for (auto a : answers_)
        if (a > 1) throw validation_error("strategy answers must be bits");
}

DeterministicStrategy DeterministicStrategy::constant(int m, int bit) {
    return DeterministicStrategy(
        m, std::vector<std::uint8_t>(std::size_t{1} << m, static_cast<std::uint8_t>(bit)));
}

DeterministicStrategy DeterministicStrategy::from_linear(const BitVector& u, int offset) {
    const int m = u.length();
    std::vector<std::uint8_t> answers(std::size_t{1} << m);
    for (std::uint32_t q = 0; q < answers.size(); ++q)
        answers[q] =
            static_cast<std::uint8_t>((std::popcount(u.word() & q) & 1) ^ offset);
    return DeterministicStrategy(m, std::move(answers));
}

DeterministicStrategy DeterministicStrategy::from_encoding(int m, std::uint64_t encoding) {
    if (m > 6) throw capacity_error("table encoding needs m <= 6, got " + std::to_string(m));
    std::vector<std::uint8_t> answers(std::size_t{1} << m);
    for (std::uint32_t q = 0; q < answers.size(); ++q)
        answers[q] = static_cast<std::uint8_t>((encoding >> q) & 1);
    return DeterministicStrategy(m, std::move(answers));
}

int DeterministicStrategy::answer(const BitVector& question) const {
    if (question.length() != m_)
        throw dimension_error("question length " + std::to_string(question.length()) +
                              " does not match strategy length " + std::to_string(m_));
    return answers_[question.word()];
}

std::uint64_t DeterministicStrategy::encoding() const {
    if (m_ > 6) throw capacity_error("table encoding needs m <= 6, got " + std::to_string(m_));
    std::uint64_t enc = 0;
    for (std::uint32_t q = 0; q < answers_.size(); ++q)
        enc |= static_cast<std::uint64_t>(answers_[q]) << q;
    return enc;
}

double eval_deterministic(const TransversalGame& game, const DeterministicStrategy& alice,
                          const DeterministicStrategy& bob) {
    if (alice.m() != game.m() || bob.m() != game.m())
        throw dimension_error("strategy length does not match game length " +
                              std::to_string(game.m()));
    const std::uint32_t n = std::uint32_t{1} << game.m();
    double total = 0.0;
    for (const auto& clause : game.clauses()) {
        const std::uint32_t z = clause.z.word();
        std::uint32_t hits = 0;
        for (std::uint32_t s = 0; s < n; ++s)
            hits += static_cast<std::uint32_t>(
                (alice.answer_word(s) ^ bob.answer_word(s ^ z)) == clause.gbit);
        total += clause.weight * static_cast<double>(hits);
    }
    return total / static_cast<double>(n);
}

double eval_linear(const TransversalGame& game, const LinearStrategy& strat) {
    if (strat.u.length() != game.m())
        throw dimension_error("strategy length " + std::to_string(strat.u.length()) +
                              " does not match game length " + std::to_string(game.m()));
    std::vector<double> lambda = fwht(theta_of(game));
    const double sign = strat.gamma_alice ? -1.0 : 1.0;
    return 0.5 + sign * lambda[strat.u.word()];
}

std::pair<DeterministicStrategy, double> best_response(const TransversalGame& game,
                                                       const DeterministicStrategy& alice) {
    if (alice.m() != game.m())
        throw dimension_error("strategy length does not match game length " +
                              std::to_string(game.m()));
    const std::uint32_t n = std::uint32_t{1} << game.m();
    std::vector<std::uint8_t> bob(n);
    double total = 0.0;
    for (std::uint32_t t = 0; t < n; ++t) {
        double score[2] = {0.0, 0.0};
        for (const auto& clause : game.clauses())
            score[alice.answer_word(t ^ clause.z.word()) ^ clause.gbit] += clause.weight;
        bob[t] = static_cast<std::uint8_t>(score[1] > score[0]);
        total += score[bob[t]];
    }
    return {DeterministicStrategy(game.m(), std::move(bob)), total / static_cast<double>(n)};
}

namespace {

struct BruteCandidate {
    double value = -1.0;
    std::uint64_t alice_encoding = 0;
};

// Scans Alice encodings [begin, end); keeps the highest value, ties to the
// smallest encoding. Each table's value is computed by the same code path in
// every partition, so partitioned scans merge to the sequential answer.
BruteCandidate scan_alice_tables(const TransversalGame& game, std::uint64_t begin,
                                 std::uint64_t end) {
    BruteCandidate best;
    for (std::uint64_t enc = begin; enc < end; ++enc) {
        DeterministicStrategy alice = DeterministicStrategy::from_encoding(game.m(), enc);
        double value = best_response(game, alice).second;
        if (value > best.value) best = {value, enc};
    }
    return best;
}

}  // namespace

std::pair<std::pair<DeterministicStrategy, DeterministicStrategy>, double>
brute_force_classical_value(const TransversalGame& game, int n_threads) {
    if (game.m() > kMaxBruteLength)
        throw capacity_error("brute force needs m <= " + std::to_string(kMaxBruteLength) +
                             ", got " + std::to_string(game.m()));
    const std::uint64_t n_tables = std::uint64_t{1} << (std::uint64_t{1} << game.m());
    BruteCandidate best;
    if (n_threads <= 1) {
        best = scan_alice_tables(game, 0, n_tables);
    } else {
        const std::uint64_t workers = static_cast<std::uint64_t>(n_threads);
        std::vector<BruteCandidate> partial(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            std::uint64_t begin = n_tables * w / workers;
            std::uint64_t end = n_tables * (w + 1) / workers;
            pool.emplace_back(
                [&, w, begin, end] { partial[w] = scan_alice_tables(game, begin, end); });
        }
        for (auto& worker : pool) worker.join();
        best = partial[0];
        for (std::uint64_t w = 1; w < workers; ++w) {
            const BruteCandidate& c = partial[w];
            if (c.value > best.value ||
                (c.value == best.value && c.alice_encoding < best.alice_encoding))
                best = c;
        }
    }
    DeterministicStrategy alice = DeterministicStrategy::from_encoding(game.m(), best.alice_encoding);
    auto [bob, value] = best_response(game, alice);
    return {{std::move(alice), std::move(bob)}, value};
}

}  // namespace txg
