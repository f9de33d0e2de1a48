#include "txg/protocol.hpp"

#include <cmath>
#include <ostream>
#include <thread>

#include "txg/errors.hpp"

namespace txg {

std::pair<BitVector, BitVector> split_shares(const BitVector& z, Rng& rng) {
    BitVector s(z.length(), rng.next_bits(z.length()));
    return {s, s ^ z};
}

namespace {

std::size_t sample_clause(const TransversalGame& game, Rng& rng) {
    const double u = rng.next_unit();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    bool seen_positive = false;
    for (std::size_t i = 0; i < game.clauses().size(); ++i) {
        const double w = game.clauses()[i].weight;
        if (w > 0.0) {
            last_positive = i;
            seen_positive = true;
        }
        cumulative += w;
        if (u < cumulative && w > 0.0) return i;
    }
    // u landed in the float gap above the last cumulative sum.
    if (!seen_positive) throw validation_error("game has no positive-weight clause");
    return last_positive;
}

}  // namespace

ProtocolTranscript run_round(const TransversalGame& game, const Prover& alice,
                             const Prover& bob, Rng& rng) {
    const std::size_t index = sample_clause(game, rng);
    const GameClause& clause = game.clauses()[index];
    auto [s, t] = split_shares(clause.z, rng);
    const int a = alice.answer(s);
    const int b = bob.answer(t);
    if ((a | 1) != 1 || (b | 1) != 1) throw validation_error("prover answer is not a bit");
    ProtocolTranscript transcript{clause.z, clause.r, s, t, a, b,
                                  (a ^ b) == clause.gbit, index};
    return transcript;
}

Estimate estimate_value(const TransversalGame& game, const Prover& alice, const Prover& bob,
                        std::uint64_t trials, std::uint64_t seed, int n_threads,
                        std::vector<ProtocolTranscript>* transcripts) {
    if (trials < 1) throw validation_error("need at least one trial");
    if (transcripts) transcripts->resize(trials, ProtocolTranscript{BitVector::zero(game.m()),
                                                                    0,
                                                                    BitVector::zero(game.m()),
                                                                    BitVector::zero(game.m()),
                                                                    0,
                                                                    0,
                                                                    false,
                                                                    0});
    auto run_range = [&](std::uint64_t begin, std::uint64_t end) -> std::uint64_t {
        std::uint64_t accepted = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            Rng round_rng = Rng::derive(seed, i);
            ProtocolTranscript transcript = run_round(game, alice, bob, round_rng);
            accepted += transcript.accepted ? 1 : 0;
            if (transcripts) (*transcripts)[i] = std::move(transcript);
        }
        return accepted;
    };

    std::uint64_t accepted = 0;
    if (n_threads <= 1) {
        accepted = run_range(0, trials);
    } else {
        const std::uint64_t workers = static_cast<std::uint64_t>(n_threads);
        std::vector<std::uint64_t> partial(workers, 0);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            std::uint64_t begin = trials * w / workers;
            std::uint64_t end = trials * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { partial[w] = run_range(begin, end); });
        }
        for (auto& worker : pool) worker.join();
        for (std::uint64_t count : partial) accepted += count;
    }

    Estimate estimate;
    estimate.accepted = accepted;
    estimate.trials = trials;
    estimate.value = static_cast<double>(accepted) / static_cast<double>(trials);
    estimate.stderr_ =
        std::sqrt(estimate.value * (1.0 - estimate.value) / static_cast<double>(trials));
    return estimate;
}

void write_transcript_log(const std::vector<ProtocolTranscript>& transcripts,
                          std::ostream& out) {
    for (std::size_t i = 0; i < transcripts.size(); ++i) {
        const ProtocolTranscript& tr = transcripts[i];
        out << "round " << (i + 1) << " z=" << tr.z.str() << " r=" << tr.r
            << " s=" << tr.s.str() << " t=" << tr.t.str() << " a=" << tr.a << " b=" << tr.b
            << " accept=" << (tr.accepted ? 1 : 0) << "\n";
    }
}

}  // namespace txg
