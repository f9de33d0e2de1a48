#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "txg/game.hpp"
#include "txg/rng.hpp"

namespace txg {

// Entangled prover pair: a shared pure state on C^d (x) C^d and one +/-1
// observable per question for each side. State entry i*d + j is the
// amplitude of Alice level i with Bob level j.
struct QuantumStrategy {
    int m = 0;  // question length
    int d = 0;  // local dimension
    Eigen::VectorXcd state;                   // length d^2, unit norm
    std::vector<Eigen::MatrixXcd> alice_obs;  // 2^m observables, d x d
    std::vector<Eigen::MatrixXcd> bob_obs;

    // Norm within 1e-12 of 1; every observable Hermitian and squaring to the
    // identity within 1e-10 (Frobenius); full question coverage; 1 <= d <= 4.
    // The d = 1 case exists for embedding deterministic strategies.
    void validate() const;
};

// Acceptance probability under the shared state:
//   sum over clauses (z,r,w,g) of w * 2^-m * sum_s 1/2 (1 + (-1)^g E(s, s^z))
// with E(s,t) = <state| A_s (x) B_t |state>, real up to floating-point
// residue. A residue above 1e-8 in the imaginary part raises numerical_error.
double eval_quantum(const TransversalGame& game, const QuantumStrategy& strat);

// Wraps a deterministic answer pair as scalar (+/-1) observables; useful for
// cross-checking eval_quantum against eval_deterministic.
QuantumStrategy embed_deterministic(const std::vector<std::uint8_t>& alice,
                                    const std::vector<std::uint8_t>& bob, int m);

// Seeded random strategy: each observable is U D U* with D a uniform +/-1
// diagonal and U drawn Haar-style (QR of a complex Gaussian matrix with the
// phase fix); the state is a normalized complex Gaussian vector. 2 <= d <= 4.
QuantumStrategy random_quantum_strategy(int m, int d, Rng& rng);

// Text format:
//   qstrat v1
//   d <int>
//   state <2 d^2 decimals, re im per amplitude>
//   A s=<bitstring> <2 d^2 decimals, row-major re im>
//   B t=<bitstring> <2 d^2 decimals, row-major re im>
// '#' lines and blank lines are ignored after the header.
QuantumStrategy load_quantum_strategy(std::istream& in);
QuantumStrategy load_quantum_strategy_file(const std::string& path);
void save_quantum_strategy(const QuantumStrategy& strat, std::ostream& out);

}  // namespace txg
