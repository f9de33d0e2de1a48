#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "txg/bitvec.hpp"
#include "txg/game.hpp"
#include "txg/rng.hpp"
#include "txg/strategy.hpp"

namespace txg {

// Weighted parity equation w_i XOR w_j XOR w_k = c, stored with i < j < k.
struct ThreeLinEquation {
    int i = 0, j = 0, k = 0;
    int c = 0;
    double weight = 0.0;
};

// A weighted system of 3-variable parity equations over m binary variables.
class ThreeLinInstance {
public:
    // Sorts each triple into i < j < k, rejects repeated indices, merges
    // duplicate (i,j,k,c) rows by summing weights, and renormalizes; a weight
    // sum further than 1e-9 from 1 is rejected. The same triple may carry
    // both right-hand sides.
    static ThreeLinInstance make(int m, std::vector<ThreeLinEquation> equations);

    int m() const { return m_; }
    const std::vector<ThreeLinEquation>& equations() const { return equations_; }

private:
    ThreeLinInstance(int m, std::vector<ThreeLinEquation> equations)
        : m_(m), equations_(std::move(equations)) {}

    int m_;
    std::vector<ThreeLinEquation> equations_;
};

inline constexpr int kMinInstanceLength = 3;

// Weighted fraction of equations the assignment w satisfies.
double witness_value(const ThreeLinInstance& inst, const BitVector& w);

// Exact maximum of witness_value over all 2^m assignments; ties resolve to
// the smallest word regardless of n_threads.
std::pair<BitVector, double> best_witness(const ThreeLinInstance& inst, int n_threads = 1);

// One clause per equation: z = e_i XOR e_j XOR e_k (weight-3 offsets only),
// label r = c, g-bit = c, weight preserved. The sorted triples make
// z <-> {i,j,k} a bijection.
TransversalGame game_from_instance(const ThreeLinInstance& inst);

// Honest play from an assignment: both provers answer dot(w, question).
LinearStrategy witness_to_linear(const BitVector& w);

// Assignment extracted from a linear strategy: w_j = u_j XOR gamma. On
// weight-3 offsets the three gammas collapse to one, so the assignment scores
// exactly what the strategy scores.
BitVector linear_to_witness(const LinearStrategy& strat);

// Seeded generators. All emit equal weights 1/eqs.
// Planted: random hidden assignment, equations consistent with it by
// construction; returns the assignment alongside the instance.
std::pair<ThreeLinInstance, BitVector> gen_planted_instance(int m, int eqs, Rng& rng);
// Contradictory: random triples, each emitted with both right-hand sides at
// equal weight, so every assignment scores exactly 1/2. eqs must be even.
ThreeLinInstance gen_contradictory_instance(int m, int eqs, Rng& rng);
// Uniform-random right-hand sides.
ThreeLinInstance gen_random_instance(int m, int eqs, Rng& rng);

// Text format:
//   3lin v1
//   m <int>
//   eq <i> <j> <k> <c> <weight>     (1-based indices)
// '#' lines and blank lines are ignored after the header.
ThreeLinInstance load_instance(std::istream& in);
ThreeLinInstance load_instance_file(const std::string& path);
void save_instance(const ThreeLinInstance& inst, std::ostream& out,
                   const std::string& comment = "");

}  // namespace txg
