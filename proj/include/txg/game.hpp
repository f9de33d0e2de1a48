#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "txg/bitvec.hpp"

namespace txg {

// One support point of the question distribution: offset z, auxiliary label r,
// probability mass, and the accepted XOR value for that pair.
struct GameClause {
    BitVector z;
    int r = 0;
    double weight = 0.0;
    int gbit = 0;
};

// A game where acceptance depends on the questions only through s XOR t and
// the label r. Alice sees s uniform, Bob sees t = s XOR z, and the verifier
// accepts iff a XOR b equals the clause's g-bit.
class TransversalGame {
public:
    // Validates, merges duplicate (z, r) pairs by summing weights (first
    // occurrence keeps its position), and renormalizes. A weight sum further
    // than 1e-9 from 1 is rejected rather than rescaled.
    static TransversalGame make(int m, std::vector<GameClause> clauses);

    int m() const { return m_; }
    const std::vector<GameClause>& clauses() const { return clauses_; }
    std::size_t clause_count() const { return clauses_.size(); }

private:
    TransversalGame(int m, std::vector<GameClause> clauses)
        : m_(m), clauses_(std::move(clauses)) {}

    int m_;
    std::vector<GameClause> clauses_;
};

// Spectral data of a game: the signed clause masses theta, their transform
// lambda, and the optimal linear strategy read off the largest |lambda|.
struct GameAnalysis {
    std::vector<double> theta;   // length 2^m, indexed by z word
    std::vector<double> lambda;  // length 2^m, indexed by u word
    BitVector u_star;
    int gamma_star = 0;
    double value = 0.0;
};

// theta[z] = sum over clauses with offset z of weight * 1/2 * (-1)^gbit.
std::vector<double> theta_of(const TransversalGame& game);

// lambda = fwht(theta); u_star = argmax |lambda| (ties to the smallest word);
// gamma_star = 0 iff lambda[u_star] >= 0; value = 1/2 + |lambda[u_star]|.
// Alice answering dot(u_star, s) XOR gamma_star and Bob answering
// dot(u_star, t) achieves the value, and no strategy, entangled or not,
// exceeds it.
GameAnalysis analyze(const TransversalGame& game);

inline constexpr int kMaxDenseLength = 10;  // 2^m x 2^m dense matrices

// The symmetric operator with entry (s, s XOR z) = theta[z]. m <= 10.
Eigen::MatrixXd phi_matrix(const TransversalGame& game);

struct SpectrumReport {
    // max over u of ||Phi h_u - lambda_u h_u||_2 / 2^{m/2}, h_u the Hadamard
    // vector with components (-1)^{dot(u,v)}.
    double max_residual = 0.0;
    // | max_u |lambda_u|  -  operator norm of Phi from a dense symmetric
    // eigensolve |. The eigensolve never touches the transform path.
    double norm_gap = 0.0;
};

SpectrumReport verify_spectrum(const TransversalGame& game);

// Text format, line-oriented:
//   txg v1
//   m <integer>
//   clause z=<bitstring> r=<integer> g=<0|1> w=<decimal>
// '#' lines and blank lines are ignored after the header.
TransversalGame load_game(std::istream& in);
TransversalGame load_game_file(const std::string& path);
void save_game(const TransversalGame& game, std::ostream& out);

}  // namespace txg
