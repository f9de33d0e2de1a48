#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "txg/bitvec.hpp"
#include "txg/game.hpp"
#include "txg/rng.hpp"
#include "txg/strategy.hpp"

namespace txg {

// A prover sees exactly one question per round and nothing else. The verifier
// talks to both sides only through this interface, so neither the offset, the
// label, nor the other prover's question can leak by construction.
class Prover {
public:
    virtual ~Prover() = default;
    virtual int answer(const BitVector& question) const = 0;
};

class TableProver : public Prover {
public:
    explicit TableProver(DeterministicStrategy table) : table_(std::move(table)) {}
    int answer(const BitVector& question) const override { return table_.answer(question); }

private:
    DeterministicStrategy table_;
};

class LinearProver : public Prover {
public:
    LinearProver(BitVector u, int offset) : u_(std::move(u)), offset_(offset) {}
    int answer(const BitVector& question) const override {
        return dot(u_, question) ^ offset_;
    }

private:
    BitVector u_;
    int offset_;
};

// Everything one round produces. t = s XOR z always; accepted iff
// a XOR b equals the sampled clause's g-bit.
struct ProtocolTranscript {
    BitVector z;
    int r = 0;
    BitVector s;
    BitVector t;
    int a = 0;
    int b = 0;
    bool accepted = false;
    std::size_t clause_index = 0;  // not logged; for consistency checks
};

// Two uniform shares of z: s fresh from the generator, t = s XOR z. Each
// share alone is uniform and carries no information about z.
std::pair<BitVector, BitVector> split_shares(const BitVector& z, Rng& rng);

// One round: sample a clause by inverse CDF over the clause list in stored
// order (zero-weight clauses are never picked), split shares, query each
// prover with only its own question, record acceptance.
ProtocolTranscript run_round(const TransversalGame& game, const Prover& alice,
                             const Prover& bob, Rng& rng);

struct Estimate {
    double value = 0.0;   // acceptance frequency
    double stderr_ = 0.0; // sqrt(p(1-p)/trials)
    std::uint64_t accepted = 0;
    std::uint64_t trials = 0;
};

// Acceptance frequency over `trials` independent rounds. Round i draws from
// the child stream derive(seed, i), so any thread count reproduces the
// sequential run bit for bit. When `transcripts` is non-null it is resized to
// `trials` and slot i receives round i's transcript.
Estimate estimate_value(const TransversalGame& game, const Prover& alice, const Prover& bob,
                        std::uint64_t trials, std::uint64_t seed, int n_threads = 1,
                        std::vector<ProtocolTranscript>* transcripts = nullptr);

// One log line per round:
//   round <n> z=<bits> r=<int> s=<bits> t=<bits> a=<bit> b=<bit> accept=<0|1>
// with n counting from 1.
void write_transcript_log(const std::vector<ProtocolTranscript>& transcripts,
                          std::ostream& out);

}  // namespace txg
