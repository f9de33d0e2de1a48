#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "txg/bitvec.hpp"
#include "txg/game.hpp"

namespace txg {

// One prover's full answer table: entry q is the answer to the question whose
// word value is q.
class DeterministicStrategy {
public:
    DeterministicStrategy(int m, std::vector<std::uint8_t> answers);

    static DeterministicStrategy constant(int m, int bit);

    // s -> dot(u, s) XOR offset.
    static DeterministicStrategy from_linear(const BitVector& u, int offset);

    // Table packed into an integer: bit q of `encoding` answers question q.
    // Needs 2^m <= 64, i.e. m <= 6.
    static DeterministicStrategy from_encoding(int m, std::uint64_t encoding);

    int m() const { return m_; }
    int answer_word(std::uint32_t question) const { return answers_[question]; }
    int answer(const BitVector& question) const;
    const std::vector<std::uint8_t>& table() const { return answers_; }

    // Inverse of from_encoding; the deterministic tie-break key. m <= 6.
    std::uint64_t encoding() const;

private:
    int m_;
    std::vector<std::uint8_t> answers_;
};

// Alice answers dot(u, s) XOR gamma_alice, Bob answers dot(u, t). Bob carries
// no offset.
struct LinearStrategy {
    BitVector u;
    int gamma_alice = 0;
};

// Exact acceptance probability:
//   sum over clauses (z,r,w,g) of w * 2^-m * #{s : alice(s) XOR bob(s XOR z) = g} / 1.
double eval_deterministic(const TransversalGame& game, const DeterministicStrategy& alice,
                          const DeterministicStrategy& bob);

// 1/2 + (-1)^gamma * lambda[u]; equals eval_deterministic of the expanded
// tables.
double eval_linear(const TransversalGame& game, const LinearStrategy& strat);

// Bob's exact best reply to a fixed Alice table, chosen per question
// independently (the acceptance probability splits into per-t terms).
// Ties go to answering 0.
std::pair<DeterministicStrategy, double> best_response(const TransversalGame& game,
                                                       const DeterministicStrategy& alice);

inline constexpr int kMaxBruteLength = 4;  // 2^{2^m} Alice tables

// Exact classical value: scans every Alice table (Bob by best_response).
// Shared randomness cannot beat a deterministic pair, so this is the full
// classical optimum. Ties resolve to the smallest Alice table encoding
// regardless of n_threads.
std::pair<std::pair<DeterministicStrategy, DeterministicStrategy>, double>
brute_force_classical_value(const TransversalGame& game, int n_threads = 1);

}  // namespace txg
